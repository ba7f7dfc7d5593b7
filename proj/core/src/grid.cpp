#include "fkswitch/grid.hpp"

#include "fkswitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fkswitch {

GridSpec::GridSpec(std::vector<double> time_nodes, std::vector<double> space_nodes,
                   std::size_t regimes)
    : times_(std::move(time_nodes)), xs_(std::move(space_nodes)), regimes_(regimes) {
    if (times_.size() < 2 || xs_.size() < 3 || regimes_ == 0) {
        throw_config("GridSpecInvalid", "need >= 2 time nodes, >= 3 space nodes, >= 1 regime");
    }
    if (times_.front() != 0.0) {
        throw_config("GridSpecInvalid", "first time node must be 0");
    }
    for (std::size_t k = 1; k < times_.size(); ++k) {
        if (!(times_[k] > times_[k - 1])) {
            throw_config("GridSpecInvalid", "time nodes must be strictly increasing");
        }
    }
    for (std::size_t j = 1; j < xs_.size(); ++j) {
        if (!(xs_[j] > xs_[j - 1])) {
            throw_config("GridSpecInvalid", "space nodes must be strictly increasing");
        }
    }

    // Uniform-x fast path for cell lookup.
    const double dx = (xs_.back() - xs_.front()) / static_cast<double>(xs_.size() - 1);
    uniform_x_ = true;
    for (std::size_t j = 0; j < xs_.size(); ++j) {
        const double expected = xs_.front() + dx * static_cast<double>(j);
        if (std::abs(xs_[j] - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
            uniform_x_ = false;
            break;
        }
    }
    inv_dx_ = uniform_x_ ? 1.0 / dx : 0.0;
}

GridSpec GridSpec::automatic(const RegimeOUModel& model, double x_center, std::size_t nt,
                             std::size_t nx, std::optional<double> x_min,
                             std::optional<double> x_max) {
    if (nt < 2 || nx < 3) {
        throw_config("GridSpecInvalid", "nt >= 2 and nx >= 3 required");
    }
    const double horizon = model.horizon();
    std::vector<double> times(nt);
    const double denom = static_cast<double>(nt - 1);
    for (std::size_t k = 0; k < nt; ++k) {
        const double back = static_cast<double>(nt - 1 - k) / denom;
        times[k] = horizon * (1.0 - back * back);
    }
    times.front() = 0.0;
    times.back() = horizon;

    const double half_span = 8.0 * model.max_stationary_std();
    const double lo = x_min.value_or(x_center - half_span);
    const double hi = x_max.value_or(x_center + half_span);
    if (!(lo < hi)) {
        throw_config("GridSpecInvalid", "x_min must be below x_max");
    }
    std::vector<double> xs(nx);
    for (std::size_t j = 0; j < nx; ++j) {
        xs[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(nx - 1);
    }
    xs.back() = hi;
    return GridSpec(std::move(times), std::move(xs), model.regimes());
}

std::size_t GridSpec::time_cell(double t) const {
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t idx = static_cast<std::size_t>(it - times_.begin());
    if (idx == 0) return 0;
    if (idx >= times_.size()) return times_.size() - 2;
    return idx - 1;
}

std::size_t GridSpec::space_cell(double x) const {
    if (uniform_x_) {
        const double pos = (x - xs_.front()) * inv_dx_;
        if (pos <= 0.0) return 0;
        const std::size_t cell = static_cast<std::size_t>(pos);
        return std::min(cell, xs_.size() - 2);
    }
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - xs_.begin());
    if (idx == 0) return 0;
    if (idx >= xs_.size()) return xs_.size() - 2;
    return idx - 1;
}

GridFunction::GridFunction(GridSpec spec)
    : spec_(std::move(spec)), values_(spec_.nt() * spec_.nx() * spec_.regimes(), 0.0) {}

double GridFunction::value(double t, double x, std::size_t regime) const {
    if (regime >= spec_.regimes()) {
        throw_numeric("RegimeOutOfRange", "regime index " + std::to_string(regime + 1));
    }
    if (t < 0.0 || t > spec_.horizon()) {
        throw_numeric("QueryOutOfRange", "t = " + std::to_string(t) + " outside the grid");
    }
    const double xc = std::clamp(x, spec_.x_min(), spec_.x_max());

    const std::size_t kt = spec_.time_cell(t);
    const std::size_t kx = spec_.space_cell(xc);
    const double t0 = spec_.times()[kt];
    const double t1 = spec_.times()[kt + 1];
    const double x0 = spec_.xs()[kx];
    const double x1 = spec_.xs()[kx + 1];
    const double wt = (t - t0) / (t1 - t0);
    const double wx = (xc - x0) / (x1 - x0);

    const double v00 = at(kt, kx, regime);
    const double v01 = at(kt, kx + 1, regime);
    const double v10 = at(kt + 1, kx, regime);
    const double v11 = at(kt + 1, kx + 1, regime);
    const double lo = v00 + wx * (v01 - v00);
    const double hi = v10 + wx * (v11 - v10);
    return lo + wt * (hi - lo);
}

double sup_norm(const GridFunction& h) {
    double best = 0.0;
    for (double v : h.data()) {
        best = std::max(best, std::abs(v));
    }
    return best;
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
    if (a.data().size() != b.data().size()) {
        throw_numeric("GridShapeMismatch", "grid functions have different shapes");
    }
    double best = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) {
        best = std::max(best, std::abs(a.data()[k] - b.data()[k]));
    }
    return best;
}

}  // namespace fkswitch
