#include "fkswitch/picard.hpp"

#include "fkswitch/csv.hpp"
#include "fkswitch/errors.hpp"
#include "fkswitch/ou_analytics.hpp"
#include "fkswitch/parallel.hpp"
#include "fkswitch/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace fkswitch {

namespace {

void check_spec_matches(const RegimeOUModel& model, const GridSpec& spec) {
    if (spec.regimes() != model.regimes()) {
        throw_config("GridSpecInvalid", "grid regime count does not match the model");
    }
    if (std::abs(spec.horizon() - model.horizon()) > 1e-12 * std::max(1.0, model.horizon())) {
        throw_config("GridSpecInvalid", "grid horizon does not match the model");
    }
}

/// Precomputed quadrature layout shared by every iteration: one set of
/// Gauss-Legendre nodes per time-grid subinterval (so the integrand is
/// piecewise-smooth on each panel) and the Gauss-Hermite rule for the
/// landing-point integral.
class SwitchingOperator {
public:
    SwitchingOperator(const RegimeOUModel& model, const DampeningSpec& dampening,
                      const GridSpec& spec, const QuadratureOptions& quad)
        : model_(model),
          spec_(spec),
          ou_call_(dampening.kind == DampeningKind::OUCall),
          threads_(quad.threads) {
        check_spec_matches(model, spec);
        const QuadratureRule hermite = gauss_hermite(quad.hermite_nodes);
        const QuadratureRule legendre = gauss_legendre(quad.legendre_nodes);

        gh_nodes_ = hermite.nodes;
        gh_weights_ = hermite.weights;
        const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
        for (double& w : gh_weights_) {
            w *= inv_sqrt_pi;  // weights now sum to 1: an expectation rule
        }

        const auto& times = spec_.times();
        const std::size_t panels = times.size() - 1;
        const std::size_t gl = legendre.nodes.size();
        u_.resize(panels * gl);
        u_weight_.resize(panels * gl);
        u_time_frac_.resize(panels * gl);
        u_end_decay_.resize(panels * gl);
        for (std::size_t p = 0; p < panels; ++p) {
            const double lo = times[p];
            const double hi = times[p + 1];
            const double mid = 0.5 * (lo + hi);
            const double half = 0.5 * (hi - lo);
            for (std::size_t g = 0; g < gl; ++g) {
                const std::size_t a = p * gl + g;
                u_[a] = mid + half * legendre.nodes[g];
                u_weight_[a] = half * legendre.weights[g];
                u_time_frac_[a] = (u_[a] - lo) / (hi - lo);
                u_end_decay_[a] = std::exp(-model.beta() * (spec_.horizon() - u_[a]));
            }
        }
        nodes_per_panel_ = gl;
    }

    GridFunction apply(const GridFunction& h) const {
        const std::size_t nt = spec_.nt();
        const std::size_t nx = spec_.nx();
        const std::size_t m = spec_.regimes();
        const std::size_t nu = u_.size();

        // Rate-weighted slices at each quadrature time: the time-interpolated
        // surface combined over landing regimes, C[a][i][.] = sum_{j != i}
        // q_ij h(u_a, ., j). Interpolation and combination commute, so the
        // inner loop below reads one slice per node.
        std::vector<double> combined(nu * m * nx);
        parallel_for(0, nu, threads_, [&](std::size_t a) {
            const std::size_t p = a / nodes_per_panel_;
            const double wt = u_time_frac_[a];
            for (std::size_t i = 0; i < m; ++i) {
                double* slice = combined.data() + (a * m + i) * nx;
                std::fill(slice, slice + nx, 0.0);
                for (std::size_t j = 0; j < m; ++j) {
                    if (j == i) continue;
                    const double q_ij = model_.generator().rate(i, j);
                    if (q_ij == 0.0) continue;
                    for (std::size_t ix = 0; ix < nx; ++ix) {
                        const double lo = h.at(p, ix, j);
                        const double hi = h.at(p + 1, ix, j);
                        slice[ix] += q_ij * (lo + wt * (hi - lo));
                    }
                }
            }
        });

        GridFunction out(spec_);
        const auto& times = spec_.times();
        const auto& xs = spec_.xs();
        const double x_lo = spec_.x_min();
        const double x_hi = spec_.x_max();
        const bool uniform = spec_.uniform_x();
        const double inv_dx =
            uniform ? static_cast<double>(nx - 1) / (x_hi - x_lo) : 0.0;
        const std::size_t gh = gh_nodes_.size();

        // One task per output row (t_k, i); the terminal row stays zero.
        const std::size_t rows = (nt - 1) * m;
        parallel_for(0, rows, threads_, [&](std::size_t row) {
            const std::size_t k = row / m;
            const std::size_t i = row % m;
            const double t_k = times[k];
            const double exit_rate = model_.holding_rate(i) + model_.rate(i);
            const double beta = model_.beta();
            const double theta_i = model_.theta(i);
            const double sig2_2b = model_.sigma(i) * model_.sigma(i) / (2.0 * beta);

            std::vector<double> acc(nx, 0.0);
            std::vector<double> damp_q(gh);

            for (std::size_t a = k * nodes_per_panel_; a < nu; ++a) {
                const double du = u_[a] - t_k;
                const double decay = std::exp(-beta * du);
                const double mean_shift = theta_i * (1.0 - decay);
                const double variance = sig2_2b * (1.0 - decay * decay);
                const double scale = std::numbers::sqrt2 * std::sqrt(variance);
                const double kernel = u_weight_[a] * std::exp(-exit_rate * du);
                const double end_decay = u_end_decay_[a];

                if (ou_call_) {
                    const double cq = end_decay * scale;
                    for (std::size_t q = 0; q < gh; ++q) {
                        damp_q[q] = gh_weights_[q] * std::exp(cq * gh_nodes_[q]);
                    }
                } else {
                    std::copy(gh_weights_.begin(), gh_weights_.end(), damp_q.begin());
                }

                const double* slice = combined.data() + (a * m + i) * nx;
                for (std::size_t ix = 0; ix < nx; ++ix) {
                    const double base = xs[ix] * decay + mean_shift;
                    const double damp_base = ou_call_ ? std::exp(end_decay * base) : 1.0;
                    double inner = 0.0;
                    for (std::size_t q = 0; q < gh; ++q) {
                        double y = base + scale * gh_nodes_[q];
                        y = std::clamp(y, x_lo, x_hi);
                        std::size_t cell;
                        double frac;
                        if (uniform) {
                            const double pos = (y - x_lo) * inv_dx;
                            cell = std::min(static_cast<std::size_t>(pos), nx - 2);
                            frac = pos - static_cast<double>(cell);
                        } else {
                            cell = spec_.space_cell(y);
                            frac = (y - xs[cell]) / (xs[cell + 1] - xs[cell]);
                        }
                        const double lo = slice[cell];
                        inner += damp_q[q] * (lo + frac * (slice[cell + 1] - lo));
                    }
                    acc[ix] += kernel * damp_base * inner;
                }
            }

            if (ou_call_) {
                const double t_decay = std::exp(-beta * (spec_.horizon() - t_k));
                for (std::size_t ix = 0; ix < nx; ++ix) {
                    out.at(k, ix, i) = acc[ix] * std::exp(-t_decay * xs[ix]);
                }
            } else {
                for (std::size_t ix = 0; ix < nx; ++ix) {
                    out.at(k, ix, i) = acc[ix];
                }
            }
        });

        return out;
    }

private:
    const RegimeOUModel& model_;
    GridSpec spec_;
    bool ou_call_;
    int threads_;
    std::size_t nodes_per_panel_ = 0;
    std::vector<double> gh_nodes_;
    std::vector<double> gh_weights_;
    std::vector<double> u_;           // quadrature times, panel-major
    std::vector<double> u_weight_;    // Legendre weight scaled by panel width
    std::vector<double> u_time_frac_; // position inside the owning panel
    std::vector<double> u_end_decay_; // exp(-beta (T - u))
};

}  // namespace

double contraction_factor(const GeneratorMatrix& generator, double horizon) {
    double rho = 0.0;
    for (std::size_t i = 0; i < generator.size(); ++i) {
        rho = std::max(rho, -std::expm1(-generator.holding_rate(i) * horizon));
    }
    return rho;
}

GridFunction build_h0(const RegimeOUModel& model, const PayoffSpec& payoff,
                      const DampeningSpec& dampening, const GridSpec& spec) {
    check_spec_matches(model, spec);
    GridFunction h0(spec);
    const std::size_t nt = spec.nt();
    const std::size_t nx = spec.nx();
    const std::size_t m = spec.regimes();
    const double horizon = spec.horizon();
    for (std::size_t k = 0; k + 1 < nt; ++k) {
        const double t = spec.times()[k];
        for (std::size_t ix = 0; ix < nx; ++ix) {
            for (std::size_t i = 0; i < m; ++i) {
                h0.at(k, ix, i) = h0_term(model, payoff, dampening, t, spec.xs()[ix], i);
            }
        }
    }
    for (std::size_t ix = 0; ix < nx; ++ix) {
        const double x = spec.xs()[ix];
        const double damp = dampening.value(model, horizon, x);
        for (std::size_t i = 0; i < m; ++i) {
            h0.at(nt - 1, ix, i) = payoff(x, i) / damp;
        }
    }
    return h0;
}

GridFunction apply_switching_operator(const RegimeOUModel& model, const DampeningSpec& dampening,
                                      const GridFunction& h, const QuadratureOptions& quad) {
    return SwitchingOperator(model, dampening, h.spec(), quad).apply(h);
}

std::pair<GridFunction, PicardReport> picard_solve(const RegimeOUModel& model,
                                                   const PayoffSpec& payoff,
                                                   const DampeningSpec& dampening,
                                                   const GridSpec& spec,
                                                   const PicardOptions& options) {
    if (!(options.tol > 0.0) || options.max_iter == 0) {
        throw_config("SolverOptionsInvalid", "tol must be positive and max_iter >= 1");
    }
    const double rho = contraction_factor(model.generator(), spec.horizon());
    if (rho >= 1.0) {
        throw_numeric("RhoNotContractive",
                      "contraction factor reached " + format_double(rho) +
                          "; holding rate times horizon is too large for the float range");
    }

    const SwitchingOperator op(model, dampening, spec, options.quadrature);
    GridFunction h0 = build_h0(model, payoff, dampening, spec);

    // Scale guard: the largest dampening value on the grid times the seed
    // magnitude must stay far inside the double range, or the quadrature
    // products overflow before the iteration can converge.
    double max_damp = 0.0;
    for (std::size_t k = 0; k < spec.nt(); ++k) {
        for (std::size_t ix = 0; ix < spec.nx(); ++ix) {
            max_damp = std::max(max_damp,
                                std::abs(dampening.value(model, spec.times()[k], spec.xs()[ix])));
        }
    }
    if (max_damp * (1.0 + sup_norm(h0)) > 1e300) {
        throw_numeric("QuadratureOverflow",
                      "dampening values exceed the floating range on this grid; shrink x_max");
    }

    PicardReport report;
    report.rho = rho;
    const double gain = rho / (1.0 - rho);

    GridFunction h = h0;
    bool converged = false;
    while (report.deltas.size() < options.max_iter) {
        const auto start = std::chrono::steady_clock::now();
        GridFunction next = op.apply(h);
        for (std::size_t idx = 0; idx < next.data().size(); ++idx) {
            next.data()[idx] += h0.data()[idx];
        }
        const double delta = sup_diff(next, h);
        h = std::move(next);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        report.deltas.push_back(delta);
        report.seconds.push_back(elapsed.count());
        if (options.on_iterate) {
            options.on_iterate(report.deltas.size(), h);
        }
        if (gain * delta <= options.tol) {
            converged = true;
            break;
        }
    }

    report.iterations = report.deltas.size();
    report.converged = converged;
    report.a_priori =
        std::pow(rho, static_cast<double>(report.iterations)) / (1.0 - rho) * report.deltas.front();
    report.a_posteriori = gain * report.deltas.back();
    return {std::move(h), std::move(report)};
}

PriceResult price(const GridFunction& solution, const RegimeOUModel& model,
                  const DampeningSpec& dampening, const PricingQuery& query) {
    const GridSpec& spec = solution.spec();
    if (query.regime >= spec.regimes()) {
        throw_numeric("RegimeOutOfRange", "regime index " + std::to_string(query.regime + 1));
    }
    PriceResult result;
    result.x_clamped = query.x < spec.x_min() || query.x > spec.x_max();
    const double x = std::clamp(query.x, spec.x_min(), spec.x_max());
    result.value = dampening.value(model, query.t, x) * solution.value(query.t, x, query.regime);
    return result;
}

std::pair<double, double> error_bounds(const PicardReport& report, std::size_t n) {
    if (report.rho >= 1.0) {
        throw_numeric("RhoNotContractive", "bounds undefined for rho >= 1");
    }
    if (n == 0 || n > report.iterations) {
        throw_numeric("IterationOutOfRange",
                      "n = " + std::to_string(n) + " outside 1.." +
                          std::to_string(report.iterations));
    }
    const double gain = 1.0 / (1.0 - report.rho);
    const double a_priori =
        std::pow(report.rho, static_cast<double>(n)) * gain * report.deltas.front();
    const double a_posteriori = report.rho * gain * report.deltas[n - 1];
    return {a_priori, a_posteriori};
}

void write_trace_csv(std::ostream& out, const PicardReport& report) {
    out << "n,delta_sup_norm,a_priori_bound,a_posteriori_bound,seconds\n";
    const double gain = 1.0 / (1.0 - report.rho);
    for (std::size_t n = 1; n <= report.iterations; ++n) {
        const double a_priori =
            std::pow(report.rho, static_cast<double>(n)) * gain * report.deltas.front();
        const double a_posteriori = report.rho * gain * report.deltas[n - 1];
        out << format_int(static_cast<long long>(n)) << ','
            << format_double(report.deltas[n - 1]) << ',' << format_double(a_priori) << ','
            << format_double(a_posteriori) << ',' << format_double(report.seconds[n - 1]) << '\n';
    }
}

void write_surface_csv(std::ostream& out, const GridFunction& solution,
                       const RegimeOUModel& model, const DampeningSpec& dampening) {
    out << "t,x,regime,H,D,v\n";
    const GridSpec& spec = solution.spec();
    for (std::size_t k = 0; k < spec.nt(); ++k) {
        for (std::size_t ix = 0; ix < spec.nx(); ++ix) {
            const double damp = dampening.value(model, spec.times()[k], spec.xs()[ix]);
            for (std::size_t i = 0; i < spec.regimes(); ++i) {
                const double h = solution.at(k, ix, i);
                out << format_double(spec.times()[k]) << ',' << format_double(spec.xs()[ix])
                    << ',' << format_int(static_cast<long long>(i + 1)) << ','
                    << format_double(h) << ',' << format_double(damp) << ','
                    << format_double(damp * h) << '\n';
            }
        }
    }
}

}  // namespace fkswitch
