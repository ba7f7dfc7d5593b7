#pragma once

#include <vector>

namespace fkswitch {

/// Nodes and weights of a fixed-order Gaussian rule.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Hermite rule: sum_k w_k f(z_k) ~ integral of f(z) exp(-z^2) dz
/// over the real line (physicists' convention, weights sum to sqrt(pi)).
QuadratureRule gauss_hermite(int n);

/// Gauss-Legendre rule on [-1, 1], weights sum to 2.
QuadratureRule gauss_legendre(int n);

inline constexpr int kDefaultHermiteNodes = 64;
inline constexpr int kDefaultLegendreNodes = 8;

}  // namespace fkswitch
