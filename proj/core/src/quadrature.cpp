#include "fkswitch/quadrature.hpp"

#include "fkswitch/errors.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

namespace fkswitch {

namespace {

constexpr int kMaxNewtonSteps = 64;

}  // namespace

// Newton iteration on the orthonormal Hermite recurrence; nodes come in
// symmetric pairs so only the upper half is solved for.
QuadratureRule gauss_hermite(int n) {
    if (n < 1) {
        throw_numeric("QuadratureOrderInvalid", "hermite order " + std::to_string(n));
    }
    QuadratureRule rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);

    const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
    const int half = (n + 1) / 2;
    double z = 0.0;

    for (int i = 0; i < half; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.nodes[1];
        } else {
            z = 2.0 * z - rule.nodes[static_cast<std::size_t>(i) - 2];
        }

        double pp = 0.0;
        bool converged = false;
        for (int step = 0; step < kMaxNewtonSteps; ++step) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z_prev = z;
            z = z_prev - p1 / pp;
            if (std::abs(z - z_prev) <= 1e-15 * (1.0 + std::abs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw_numeric("QuadratureNoConvergence",
                          "hermite node " + std::to_string(i) + " of order " + std::to_string(n));
        }
        // Store descending on the top half, mirrored on the bottom half.
        rule.nodes[static_cast<std::size_t>(i)] = z;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = -z;
        const double w = 2.0 / (pp * pp);
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

QuadratureRule gauss_legendre(int n) {
    if (n < 1) {
        throw_numeric("QuadratureOrderInvalid", "legendre order " + std::to_string(n));
    }
    QuadratureRule rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);

    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        bool converged = false;
        for (int step = 0; step < kMaxNewtonSteps; ++step) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z_prev = z;
            z = z_prev - p1 / pp;
            if (std::abs(z - z_prev) <= 1e-15) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw_numeric("QuadratureNoConvergence",
                          "legendre node " + std::to_string(i) + " of order " + std::to_string(n));
        }
        rule.nodes[static_cast<std::size_t>(i)] = -z;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

}  // namespace fkswitch
