#pragma once

#include "fkswitch/model.hpp"
#include "fkswitch/normal.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace fkswitch {

/// Conditional moments of the frozen-regime process over an elapsed time s:
/// X_{t+s} | X_t = x is Gaussian with mean x * decay + mean_shift and the
/// given variance, where decay = exp(-beta s).
struct TransitionMoments {
    double mean_shift = 0.0;
    double variance = 0.0;
    double decay = 1.0;
};

/// Throws Error{NegativeElapsed}.
TransitionMoments ou_moments(const RegimeOUModel& model, double elapsed, std::size_t regime);

/// Gaussian transition density of the frozen-regime process from (t, x) to
/// (u, y). Throws Error{NonPositiveElapsed} when u <= t.
double transition_density(const RegimeOUModel& model, double u, double y, double t, double x,
                          std::size_t regime);

/// Intermediate quantities of the closed-form call price.
struct CallClosedFormTerms {
    double d1 = 0.0;
    double d2 = 0.0;
    double forward_exponent = 0.0;  // x*decay + mean_shift + variance/2
};

CallClosedFormTerms call_closed_form_terms(const RegimeOUModel& model, double strike, double t,
                                           double x, std::size_t regime);

/// Discounted call value under the frozen-regime dynamics,
///   exp(-r tau) [ exp(forward_exponent) Phi(d1) - K Phi(d2) ],
/// reducing to the terminal payoff when tau is below 1e-12 (the closed form
/// has a 0/0 there). Throws Error{StrikeNonPositive}.
double v0_call(const RegimeOUModel& model, double strike, double t, double x, std::size_t regime);

/// Scaled no-switching term: the probability of holding the current regime
/// to the horizon times the frozen-regime discounted payoff expectation,
/// divided by the dampening value at (t, x). Call payoffs use the closed
/// form, constants are discounted directly, and tabulated payoffs use
/// Gauss-Hermite quadrature against the transition density.
double h0_term(const RegimeOUModel& model, const PayoffSpec& payoff,
               const DampeningSpec& dampening, double t, double x, std::size_t regime);

/// E[ D(u, X_u) | X_t = x ] for the frozen-regime process. Exact lognormal
/// expression for the OUCall dampening, identically 1 for Unit.
/// Throws Error{TimeOrderViolation} unless t <= u <= horizon.
double dampening_conditional_expectation(const RegimeOUModel& model,
                                         const DampeningSpec& dampening, double t, double x,
                                         double u, std::size_t regime);

struct CertificatePoint {
    double t = 0.0;
    double u = 0.0;
    double x = 0.0;
};

struct CertificateRow {
    double t, u, x;
    double lhs;     // conditional dampening expectation
    double rhs;     // D(t, x) * exp(r (u - t))
    double margin;  // lhs - rhs, expected <= 0
};

struct CertificateReport {
    std::vector<CertificateRow> rows;
    double max_relative_violation = 0.0;  // max margin / rhs over the sweep
    CertificatePoint worst;
    bool pass = true;
};

/// Sweeps the supermartingale inequality lhs <= rhs over the given
/// (t, u, x) triples for one regime. Never throws on failure; see
/// require_supermartingale for the throwing form.
CertificateReport supermartingale_certificate(const RegimeOUModel& model,
                                              const DampeningSpec& dampening,
                                              std::span<const CertificatePoint> points,
                                              std::size_t regime, double relative_tol = 1e-12);

/// Throws Error{CertificateFailed} carrying the worst offending triple.
void require_supermartingale(const RegimeOUModel& model, const DampeningSpec& dampening,
                             std::span<const CertificatePoint> points, std::size_t regime,
                             double relative_tol = 1e-12);

/// Default sweep: 21 start times, 21 elapsed fractions, 41 space points
/// spanning [x_lo, x_hi].
std::vector<CertificatePoint> default_certificate_points(const RegimeOUModel& model, double x_lo,
                                                         double x_hi, int n_t = 21, int n_u = 21,
                                                         int n_x = 41);

/// Rows (t, u, x, lhs, rhs, margin) with a header.
void write_certificate_csv(std::ostream& out, const CertificateReport& report);

}  // namespace fkswitch
