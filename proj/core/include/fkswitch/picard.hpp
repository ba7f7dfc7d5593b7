#pragma once

#include "fkswitch/grid.hpp"
#include "fkswitch/model.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

namespace fkswitch {

/// Convergence record of the successive-approximation run.
///
/// deltas[k] is the sup-norm step ||H_{k+1} - H_k||; rho is the contraction
/// factor; the a-priori bound is rho^n / (1 - rho) * deltas[0] and the
/// a-posteriori bound rho / (1 - rho) * deltas[n-1].
struct PicardReport {
    std::size_t iterations = 0;
    std::vector<double> deltas;
    double rho = 0.0;
    double a_priori = 0.0;
    double a_posteriori = 0.0;
    bool converged = false;
    std::vector<double> seconds;  // wall clock per iteration
};

struct QuadratureOptions {
    int hermite_nodes = 64;  // space integral per time node
    int legendre_nodes = 8;  // per time-grid subinterval
    int threads = 0;         // 0 = automatic
};

struct PicardOptions {
    double tol = 1e-6;
    std::size_t max_iter = 200;
    QuadratureOptions quadrature;
    /// Called after each iteration with (n, H_n); used for convergence studies.
    std::function<void(std::size_t, const GridFunction&)> on_iterate;
};

/// Sup-norm Lipschitz constant of the switching operator over the horizon:
/// max_i (1 - exp(-q_i T)). Zero without switching; approaches 1 only as
/// q_i T grows without bound.
double contraction_factor(const GeneratorMatrix& generator, double horizon);

/// Tabulates the no-switching term on the grid. Interior nodes hold the
/// scaled frozen-regime expectation; the terminal row holds the scaled
/// payoff itself.
GridFunction build_h0(const RegimeOUModel& model, const PayoffSpec& payoff,
                      const DampeningSpec& dampening, const GridSpec& spec);

/// One application of the switching operator to a grid surface:
/// at each node, the dampened expectation of h over the first-jump time and
/// landing point, computed with Gauss-Hermite quadrature in space and
/// composite Gauss-Legendre quadrature over the remaining time-grid
/// subintervals. The terminal row is zero. Output bits do not depend on
/// the worker count.
GridFunction apply_switching_operator(const RegimeOUModel& model, const DampeningSpec& dampening,
                                      const GridFunction& h, const QuadratureOptions& quad = {});

/// Successive approximations H_{n+1} = T(H_n) + H_0 from H_0, stopping when
/// the a-posteriori bound drops to tol or max_iter is reached (the report's
/// converged flag records which). Throws Error{RhoNotContractive,
/// QuadratureOverflow}.
std::pair<GridFunction, PicardReport> picard_solve(const RegimeOUModel& model,
                                                   const PayoffSpec& payoff,
                                                   const DampeningSpec& dampening,
                                                   const GridSpec& spec,
                                                   const PicardOptions& options = {});

struct PriceResult {
    double value = 0.0;
    bool x_clamped = false;  // query fell outside the space span
};

/// Undampened value at the query: D(t, x) times the interpolated surface.
PriceResult price(const GridFunction& solution, const RegimeOUModel& model,
                  const DampeningSpec& dampening, const PricingQuery& query);

/// (a_priori, a_posteriori) bounds after n iterations, 1 <= n <= iterations.
/// Throws Error{RhoNotContractive} when rho >= 1.
std::pair<double, double> error_bounds(const PicardReport& report, std::size_t n);

/// Columns (n, delta_sup_norm, a_priori_bound, a_posteriori_bound, seconds).
void write_trace_csv(std::ostream& out, const PicardReport& report);

/// Columns (t, x, regime, H, D, v) over all grid nodes, regime 1-based.
void write_surface_csv(std::ostream& out, const GridFunction& solution,
                       const RegimeOUModel& model, const DampeningSpec& dampening);

}  // namespace fkswitch
