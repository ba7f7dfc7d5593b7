#pragma once

#include "fkswitch/model.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>

#include <vector>

namespace fkswitch {

struct PdeParams {
    double dt = 1e-3;
    double dx = 0.005;
    double x_min = 0.0;
    double x_max = 0.0;
    /// Backward-Euler startup steps (each split in two half steps) before
    /// switching to Crank-Nicolson; damps the odd-even ringing a kinked
    /// terminal condition excites.
    int rannacher_steps = 2;

    /// dt/dx as requested, x span defaulting to x_center plus/minus eight
    /// stationary standard deviations.
    static PdeParams automatic(const RegimeOUModel& model, double x_center, double dt = 1e-3,
                               double dx = 0.005, std::optional<double> x_min = {},
                               std::optional<double> x_max = {});
};

/// Backward-in-time lattice of the undampened value surface v(t, x, regime)
/// on uniform time and space steps.
class PdeGrid {
public:
    PdeGrid(double horizon, std::size_t n_steps, double x_min, double dx, std::size_t nx,
            std::size_t regimes);

    std::size_t nt() const noexcept { return n_steps_ + 1; }
    std::size_t nx() const noexcept { return nx_; }
    std::size_t regimes() const noexcept { return regimes_; }
    double horizon() const noexcept { return horizon_; }
    double dt() const noexcept { return horizon_ / static_cast<double>(n_steps_); }
    double dx() const noexcept { return dx_; }
    double time(std::size_t k) const { return horizon_ * static_cast<double>(k) /
                                              static_cast<double>(n_steps_); }
    double x(std::size_t j) const { return x_min_ + dx_ * static_cast<double>(j); }
    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_min_ + dx_ * static_cast<double>(nx_ - 1); }

    double& at(std::size_t k, std::size_t j, std::size_t regime) {
        return values_[(k * nx_ + j) * regimes_ + regime];
    }
    double at(std::size_t k, std::size_t j, std::size_t regime) const {
        return values_[(k * nx_ + j) * regimes_ + regime];
    }

    /// Bilinear interpolation; throws Error{OutOfRange, RegimeOutOfRange}.
    double value(double t, double x, std::size_t regime) const;

private:
    double horizon_;
    std::size_t n_steps_;
    double x_min_;
    double dx_;
    std::size_t nx_;
    std::size_t regimes_;
    std::vector<double> values_;
};

/// Solves the coupled backward system with Crank-Nicolson in time and
/// space per regime, the regime-coupling source taken explicitly at the
/// known level, central differences inside, and a zero-curvature condition
/// at both space edges. Per-regime tridiagonal solves run concurrently.
/// Throws Error{GridTooCoarse, UnstableParameters}.
PdeGrid pde_solve(const RegimeOUModel& model, const PayoffSpec& payoff, const PdeParams& params,
                  int threads = 0);

double pde_price(const PdeGrid& grid, const PricingQuery& query);

/// Columns (t, x, regime, v) sampled at the given node sets (regime 1-based).
void write_pde_surface_csv(std::ostream& out, const PdeGrid& grid,
                           const std::vector<double>& times, const std::vector<double>& xs);

}  // namespace fkswitch
