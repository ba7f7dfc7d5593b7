#include "fkswitch/ou_analytics.hpp"

#include "fkswitch/csv.hpp"
#include "fkswitch/errors.hpp"
#include "fkswitch/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace fkswitch {

namespace {

constexpr double kTerminalWindow = 1e-12;

}  // namespace

TransitionMoments ou_moments(const RegimeOUModel& model, double elapsed, std::size_t regime) {
    if (elapsed < 0.0) {
        throw_numeric("NegativeElapsed", "elapsed = " + std::to_string(elapsed));
    }
    const double beta = model.beta();
    TransitionMoments m;
    m.decay = std::exp(-beta * elapsed);
    // 1 - exp(-beta s) via expm1 keeps small elapsed times accurate.
    const double one_minus_decay = -std::expm1(-beta * elapsed);
    m.mean_shift = model.theta(regime) * one_minus_decay;
    const double sig = model.sigma(regime);
    m.variance = sig * sig / (2.0 * beta) * (-std::expm1(-2.0 * beta * elapsed));
    return m;
}

double transition_density(const RegimeOUModel& model, double u, double y, double t, double x,
                          std::size_t regime) {
    if (!(u > t)) {
        throw_numeric("NonPositiveElapsed",
                      "u = " + std::to_string(u) + " must exceed t = " + std::to_string(t));
    }
    const TransitionMoments m = ou_moments(model, u - t, regime);
    const double mean = x * m.decay + m.mean_shift;
    const double diff = y - mean;
    return std::exp(-0.5 * diff * diff / m.variance) /
           std::sqrt(2.0 * std::numbers::pi * m.variance);
}

CallClosedFormTerms call_closed_form_terms(const RegimeOUModel& model, double strike, double t,
                                           double x, std::size_t regime) {
    const double tau = model.horizon() - t;
    const TransitionMoments m = ou_moments(model, tau, regime);
    const double nu = std::sqrt(m.variance);
    CallClosedFormTerms terms;
    terms.forward_exponent = x * m.decay + m.mean_shift + 0.5 * m.variance;
    terms.d1 = (x * m.decay - std::log(strike) + m.mean_shift + m.variance) / nu;
    terms.d2 = terms.d1 - nu;
    return terms;
}

double v0_call(const RegimeOUModel& model, double strike, double t, double x,
               std::size_t regime) {
    if (!(strike > 0.0)) {
        throw_numeric("StrikeNonPositive", "strike = " + std::to_string(strike));
    }
    const double tau = model.horizon() - t;
    if (tau < kTerminalWindow) {
        return std::max(std::exp(x) - strike, 0.0);
    }
    const CallClosedFormTerms terms = call_closed_form_terms(model, strike, t, x, regime);
    const double value = std::exp(-model.rate(regime) * tau) *
                         (std::exp(terms.forward_exponent) * normal_cdf(terms.d1) -
                          strike * normal_cdf(terms.d2));
    return std::max(value, 0.0);
}

double h0_term(const RegimeOUModel& model, const PayoffSpec& payoff,
               const DampeningSpec& dampening, double t, double x, std::size_t regime) {
    const double tau = model.horizon() - t;
    const double discount = std::exp(-model.rate(regime) * tau);

    double inner = 0.0;
    switch (payoff.kind()) {
        case PayoffKind::Call:
            inner = v0_call(model, payoff.strike(), t, x, regime);
            break;
        case PayoffKind::Constant:
            inner = payoff.level() * discount;
            break;
        case PayoffKind::BoundedCustom: {
            if (tau < kTerminalWindow) {
                inner = payoff(x, regime) * discount;
                break;
            }
            static const QuadratureRule hermite = gauss_hermite(kDefaultHermiteNodes);
            const TransitionMoments m = ou_moments(model, tau, regime);
            const double mean = x * m.decay + m.mean_shift;
            const double scale = std::numbers::sqrt2 * std::sqrt(m.variance);
            double acc = 0.0;
            for (std::size_t q = 0; q < hermite.nodes.size(); ++q) {
                acc += hermite.weights[q] * payoff(mean + scale * hermite.nodes[q], regime);
            }
            inner = discount * acc / std::sqrt(std::numbers::pi);
            break;
        }
    }
    const double hold_probability = std::exp(-model.holding_rate(regime) * tau);
    return hold_probability * inner / dampening.value(model, t, x);
}

double dampening_conditional_expectation(const RegimeOUModel& model,
                                         const DampeningSpec& dampening, double t, double x,
                                         double u, std::size_t regime) {
    if (!(t <= u) || u > model.horizon()) {
        throw_numeric("TimeOrderViolation", "need t <= u <= horizon, got t = " +
                                                std::to_string(t) + ", u = " + std::to_string(u));
    }
    if (dampening.kind == DampeningKind::Unit) {
        return 1.0;
    }
    const TransitionMoments m = ou_moments(model, u - t, regime);
    const double end_decay = std::exp(-model.beta() * (model.horizon() - u));
    return std::exp(end_decay * (x * m.decay + m.mean_shift) +
                    0.5 * end_decay * end_decay * m.variance);
}

CertificateReport supermartingale_certificate(const RegimeOUModel& model,
                                              const DampeningSpec& dampening,
                                              std::span<const CertificatePoint> points,
                                              std::size_t regime, double relative_tol) {
    CertificateReport report;
    report.rows.reserve(points.size());
    report.max_relative_violation = -std::numeric_limits<double>::infinity();
    for (const CertificatePoint& p : points) {
        const double lhs = dampening_conditional_expectation(model, dampening, p.t, p.x, p.u,
                                                             regime);
        const double rhs = dampening.value(model, p.t, p.x) *
                           std::exp(model.rate(regime) * (p.u - p.t));
        const double margin = lhs - rhs;
        report.rows.push_back({p.t, p.u, p.x, lhs, rhs, margin});
        const double relative = margin / rhs;
        if (relative > report.max_relative_violation) {
            report.max_relative_violation = relative;
            report.worst = p;
        }
    }
    report.pass = report.max_relative_violation <= relative_tol;
    return report;
}

void require_supermartingale(const RegimeOUModel& model, const DampeningSpec& dampening,
                             std::span<const CertificatePoint> points, std::size_t regime,
                             double relative_tol) {
    const CertificateReport report =
        supermartingale_certificate(model, dampening, points, regime, relative_tol);
    if (!report.pass) {
        throw_numeric("CertificateFailed",
                      "relative violation " + format_double(report.max_relative_violation) +
                          " at (t, u, x) = (" + format_double(report.worst.t) + ", " +
                          format_double(report.worst.u) + ", " + format_double(report.worst.x) +
                          "), regime " + std::to_string(regime + 1));
    }
}

std::vector<CertificatePoint> default_certificate_points(const RegimeOUModel& model, double x_lo,
                                                         double x_hi, int n_t, int n_u, int n_x) {
    const double horizon = model.horizon();
    std::vector<CertificatePoint> points;
    points.reserve(static_cast<std::size_t>(n_t) * n_u * n_x);
    for (int a = 0; a < n_t; ++a) {
        const double t = horizon * a / n_t;  // start times in [0, T)
        for (int b = 0; b < n_u; ++b) {
            const double frac = b / (n_u - 1.0);
            const double u = t * (1.0 - frac) + horizon * frac;
            for (int c = 0; c < n_x; ++c) {
                const double x = x_lo + (x_hi - x_lo) * c / (n_x - 1.0);
                points.push_back({t, u, x});
            }
        }
    }
    return points;
}

void write_certificate_csv(std::ostream& out, const CertificateReport& report) {
    out << "t,u,x,lhs,rhs,margin\n";
    for (const CertificateRow& row : report.rows) {
        out << format_double(row.t) << ',' << format_double(row.u) << ',' << format_double(row.x)
            << ',' << format_double(row.lhs) << ',' << format_double(row.rhs) << ','
            << format_double(row.margin) << '\n';
    }
}

}  // namespace fkswitch
