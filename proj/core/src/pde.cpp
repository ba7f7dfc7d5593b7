#include "fkswitch/pde.hpp"

#include "fkswitch/csv.hpp"
#include "fkswitch/errors.hpp"
#include "fkswitch/parallel.hpp"
#include "fkswitch/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

namespace fkswitch {

namespace {

constexpr double kBlowUpLimit = 1e12;
constexpr double kMaxCouplingPerStep = 0.1;  // max_i q_i * dt allowed

// Spatial operator bands for one regime, reaction included: interior rows
// use central differences, the edge rows a one-sided first derivative with
// the curvature term dropped (zero-curvature boundary).
struct RegimeBands {
    std::vector<double> sub, diag, super;
};

RegimeBands build_bands(const RegimeOUModel& model, std::size_t regime, double x_min, double dx,
                        std::size_t nx) {
    RegimeBands bands;
    bands.sub.assign(nx, 0.0);
    bands.diag.assign(nx, 0.0);
    bands.super.assign(nx, 0.0);

    const double beta = model.beta();
    const double sig2 = model.sigma(regime) * model.sigma(regime);
    const double react = model.rate(regime) + model.holding_rate(regime);
    const double inv_dx = 1.0 / dx;
    const double diff = 0.5 * sig2 * inv_dx * inv_dx;

    const double b_lo = beta * (model.theta(regime) - x_min);
    bands.diag[0] = -b_lo * inv_dx - react;
    bands.super[0] = b_lo * inv_dx;

    for (std::size_t j = 1; j + 1 < nx; ++j) {
        const double b = beta * (model.theta(regime) - (x_min + dx * static_cast<double>(j)));
        const double adv = 0.5 * b * inv_dx;
        bands.sub[j] = diff - adv;
        bands.diag[j] = -2.0 * diff - react;
        bands.super[j] = diff + adv;
    }

    const double b_hi = beta * (model.theta(regime) - (x_min + dx * static_cast<double>(nx - 1)));
    bands.sub[nx - 1] = -b_hi * inv_dx;
    bands.diag[nx - 1] = b_hi * inv_dx - react;
    return bands;
}

// Applies the banded spatial operator to one regime slice.
void apply_bands(const RegimeBands& bands, const double* v, std::size_t nx, double* out) {
    out[0] = bands.diag[0] * v[0] + bands.super[0] * v[1];
    for (std::size_t j = 1; j + 1 < nx; ++j) {
        out[j] = bands.sub[j] * v[j - 1] + bands.diag[j] * v[j] + bands.super[j] * v[j + 1];
    }
    out[nx - 1] = bands.sub[nx - 1] * v[nx - 2] + bands.diag[nx - 1] * v[nx - 1];
}

}  // namespace

PdeParams PdeParams::automatic(const RegimeOUModel& model, double x_center, double dt, double dx,
                               std::optional<double> x_min, std::optional<double> x_max) {
    PdeParams params;
    params.dt = dt;
    params.dx = dx;
    const double half_span = 8.0 * model.max_stationary_std();
    params.x_min = x_min.value_or(x_center - half_span);
    params.x_max = x_max.value_or(x_center + half_span);
    return params;
}

PdeGrid::PdeGrid(double horizon, std::size_t n_steps, double x_min, double dx, std::size_t nx,
                 std::size_t regimes)
    : horizon_(horizon),
      n_steps_(n_steps),
      x_min_(x_min),
      dx_(dx),
      nx_(nx),
      regimes_(regimes),
      values_((n_steps + 1) * nx * regimes, 0.0) {}

double PdeGrid::value(double t, double x, std::size_t regime) const {
    if (regime >= regimes_) {
        throw_numeric("RegimeOutOfRange", "regime index " + std::to_string(regime + 1));
    }
    if (t < 0.0 || t > horizon_ || x < x_min() - 1e-12 || x > x_max() + 1e-12) {
        throw_numeric("OutOfRange", "(t, x) = (" + format_double(t) + ", " + format_double(x) +
                                        ") outside the lattice");
    }
    const double xc = std::clamp(x, x_min(), x_max());
    const double tpos = t / dt();
    const std::size_t kt = std::min(static_cast<std::size_t>(tpos), n_steps_ - 1);
    const double wt = tpos - static_cast<double>(kt);
    const double xpos = (xc - x_min_) / dx_;
    const std::size_t jx = std::min(static_cast<std::size_t>(xpos), nx_ - 2);
    const double wx = xpos - static_cast<double>(jx);

    const double v00 = at(kt, jx, regime);
    const double v01 = at(kt, jx + 1, regime);
    const double v10 = at(kt + 1, jx, regime);
    const double v11 = at(kt + 1, jx + 1, regime);
    const double lo = v00 + wx * (v01 - v00);
    const double hi = v10 + wx * (v11 - v10);
    return lo + wt * (hi - lo);
}

PdeGrid pde_solve(const RegimeOUModel& model, const PayoffSpec& payoff, const PdeParams& params,
                  int threads) {
    if (!(params.dt > 0.0) || !(params.dx > 0.0) || !(params.x_min < params.x_max)) {
        throw_config("GridTooCoarse", "need dt > 0, dx > 0 and x_min < x_max");
    }
    const double horizon = model.horizon();
    const std::size_t n_steps = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(horizon / params.dt - 1e-12)));
    const double dt = horizon / static_cast<double>(n_steps);
    const double span = params.x_max - params.x_min;
    const std::size_t nx = std::max<std::size_t>(
        3, static_cast<std::size_t>(std::llround(span / params.dx)) + 1);
    const double dx = span / static_cast<double>(nx - 1);
    const std::size_t m = model.regimes();

    if (model.generator().max_holding_rate() * dt > kMaxCouplingPerStep) {
        throw_config("GridTooCoarse",
                     "explicit regime coupling needs max holding rate * dt <= " +
                         format_double(kMaxCouplingPerStep) + "; shrink dt");
    }

    PdeGrid grid(horizon, n_steps, params.x_min, dx, nx, m);

    // Regime-major working slices.
    std::vector<double> known(m * nx);
    std::vector<double> next(m * nx);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < nx; ++j) {
            known[i * nx + j] = payoff(grid.x(j), i);
            grid.at(n_steps, j, i) = known[i * nx + j];
        }
    }

    std::vector<RegimeBands> bands;
    bands.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        bands.push_back(build_bands(model, i, params.x_min, dx, nx));
    }

    // One theta-weighted step of length h for all regimes, coupling source
    // frozen at the known level.
    auto advance = [&](const std::vector<double>& from, std::vector<double>& to, double theta_w,
                       double h) {
        parallel_for(0, m, threads, [&](std::size_t i) {
            std::vector<double> rhs(nx), lv(nx), sub(nx), diag(nx), super(nx), scratch;
            apply_bands(bands[i], from.data() + i * nx, nx, lv.data());
            const double expl = h * (1.0 - theta_w);
            for (std::size_t j = 0; j < nx; ++j) {
                double coupling = 0.0;
                for (std::size_t l = 0; l < m; ++l) {
                    if (l == i) continue;
                    const double q_il = model.generator().rate(i, l);
                    if (q_il != 0.0) coupling += q_il * from[l * nx + j];
                }
                rhs[j] = from[i * nx + j] + expl * lv[j] + h * coupling;
            }
            const double impl = h * theta_w;
            for (std::size_t j = 0; j < nx; ++j) {
                sub[j] = -impl * bands[i].sub[j];
                diag[j] = 1.0 - impl * bands[i].diag[j];
                super[j] = -impl * bands[i].super[j];
            }
            solve_tridiagonal(sub, diag, super, rhs, {to.data() + i * nx, nx}, scratch);
        });
    };

    std::vector<double> half_step(m * nx);
    for (std::size_t step = 0; step < n_steps; ++step) {
        const std::size_t k = n_steps - 1 - step;  // slice being computed
        if (static_cast<int>(step) < params.rannacher_steps) {
            advance(known, half_step, 1.0, 0.5 * dt);
            advance(half_step, next, 1.0, 0.5 * dt);
        } else {
            advance(known, next, 0.5, dt);
        }

        double peak = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < nx; ++j) {
                const double v = next[i * nx + j];
                peak = std::max(peak, std::abs(v));
                grid.at(k, j, i) = v;
            }
        }
        if (!(peak < kBlowUpLimit)) {
            throw_numeric("UnstableParameters",
                          "lattice values reached " + format_double(peak) + " at t = " +
                              format_double(grid.time(k)));
        }
        known.swap(next);
    }
    return grid;
}

double pde_price(const PdeGrid& grid, const PricingQuery& query) {
    return grid.value(query.t, query.x, query.regime);
}

void write_pde_surface_csv(std::ostream& out, const PdeGrid& grid,
                           const std::vector<double>& times, const std::vector<double>& xs) {
    out << "t,x,regime,v\n";
    for (double t : times) {
        for (double x : xs) {
            for (std::size_t i = 0; i < grid.regimes(); ++i) {
                out << format_double(t) << ',' << format_double(x) << ','
                    << format_int(static_cast<long long>(i + 1)) << ','
                    << format_double(grid.value(t, x, i)) << '\n';
            }
        }
    }
}

}  // namespace fkswitch
