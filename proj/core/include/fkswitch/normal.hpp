#pragma once

namespace fkswitch {

/// Standard normal CDF, absolute error below 1e-12 over the real line.
double normal_cdf(double z);

/// Standard normal density.
double normal_pdf(double z);

/// Complementary error function via rational Chebyshev approximations
/// (three-branch form). Exposed for direct testing.
double erfc_rational(double x);

}  // namespace fkswitch
