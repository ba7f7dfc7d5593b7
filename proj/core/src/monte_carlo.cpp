#include "fkswitch/monte_carlo.hpp"

#include "fkswitch/csv.hpp"
#include "fkswitch/errors.hpp"
#include "fkswitch/ou_analytics.hpp"
#include "fkswitch/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace fkswitch {

namespace {

// Stream ids keying the per-pair substreams.
constexpr std::uint64_t kRegimeStream = 0;
constexpr std::uint64_t kGaussianStream = 1;

// Pairs per reduction block; block boundaries are fixed so the final
// accumulation order never depends on the worker count.
constexpr std::int64_t kPairsPerBlock = 4096;

struct BlockMoments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

}  // namespace

RegimePath simulate_regime_path(const GeneratorMatrix& generator, double t, double horizon,
                                std::size_t start, RngStream& stream) {
    RegimePath path;
    path.regimes.push_back(start);

    double clock = t;
    std::size_t current = start;
    while (true) {
        const double q = generator.holding_rate(current);
        if (q <= 0.0) {
            break;  // absorbing: infinite holding time, truncated at the horizon
        }
        const double hold = stream.exponential(q);
        if (clock + hold >= horizon) {
            break;
        }
        clock += hold;

        // Jump target j != current with probability rate(current, j) / q.
        const double pick = stream.uniform() * q;
        double cumulative = 0.0;
        std::size_t target = current;
        for (std::size_t j = 0; j < generator.size(); ++j) {
            if (j == current) continue;
            cumulative += generator.rate(current, j);
            if (pick < cumulative) {
                target = j;
                break;
            }
        }
        if (target == current) {
            // pick landed on the rounding edge; take the last positive rate
            for (std::size_t j = generator.size(); j-- > 0;) {
                if (j != current && generator.rate(current, j) > 0.0) {
                    target = j;
                    break;
                }
            }
        }

        path.jump_times.push_back(clock);
        path.regimes.push_back(target);
        current = target;
    }

    double seg_start = t;
    for (std::size_t k = 0; k < path.jump_times.size(); ++k) {
        path.segments.push_back({seg_start, path.jump_times[k], path.regimes[k]});
        seg_start = path.jump_times[k];
    }
    path.segments.push_back({seg_start, horizon, path.regimes.back()});
    return path;
}

std::pair<double, double> simulate_x_on_path(const RegimeOUModel& model, const RegimePath& path,
                                             double x0, RngStream& gaussians, bool sign_flip) {
    double x = x0;
    double rate_integral = 0.0;
    for (const RegimePath::Segment& seg : path.segments) {
        const double dt = seg.end - seg.start;
        rate_integral += model.rate(seg.regime) * dt;
        if (dt <= 0.0) continue;
        const TransitionMoments m = ou_moments(model, dt, seg.regime);
        double z = gaussians.normal();
        if (sign_flip) z = -z;
        x = x * m.decay + m.mean_shift + std::sqrt(m.variance) * z;
    }
    return {x, std::exp(-rate_integral)};
}

McEstimate mc_price(const RegimeOUModel& model, const PayoffSpec& payoff,
                    const PricingQuery& query, const McOptions& options) {
    if (options.paths < 100) {
        throw_config("PathCountTooSmall",
                     "need at least 100 paths, got " + std::to_string(options.paths));
    }
    if (query.regime >= model.regimes()) {
        throw_config("RegimeOutOfRange", "regime index " + std::to_string(query.regime + 1));
    }

    const std::int64_t pairs = (options.paths + 1) / 2;
    const std::int64_t blocks = (pairs + kPairsPerBlock - 1) / kPairsPerBlock;
    std::vector<BlockMoments> block_moments(static_cast<std::size_t>(blocks));

    parallel_for(0, static_cast<std::size_t>(blocks), options.threads, [&](std::size_t b) {
        const std::int64_t first = static_cast<std::int64_t>(b) * kPairsPerBlock;
        const std::int64_t last = std::min(first + kPairsPerBlock, pairs);
        BlockMoments moments;
        for (std::int64_t p = first; p < last; ++p) {
            const std::uint64_t pair_index = static_cast<std::uint64_t>(p);
            RngStream regime_stream(options.seed, pair_index, kRegimeStream);
            const RegimePath path = simulate_regime_path(model.generator(), query.t,
                                                         model.horizon(), query.regime,
                                                         regime_stream);

            RngStream gauss_a(options.seed, pair_index, kGaussianStream);
            const auto [x_a, disc_a] = simulate_x_on_path(model, path, query.x, gauss_a, false);
            RngStream gauss_b(options.seed, pair_index, kGaussianStream);
            const auto [x_b, disc_b] = simulate_x_on_path(model, path, query.x, gauss_b, true);

            const std::size_t terminal = path.terminal_regime();
            const double value =
                0.5 * (disc_a * payoff(x_a, terminal) + disc_b * payoff(x_b, terminal));
            moments.sum += value;
            moments.sum_sq += value * value;
        }
        block_moments[b] = moments;
    });

    double sum = 0.0;
    double sum_sq = 0.0;
    for (const BlockMoments& moments : block_moments) {
        sum += moments.sum;
        sum_sq += moments.sum_sq;
    }

    const double n = static_cast<double>(pairs);
    const double mean = sum / n;
    double variance = 0.0;
    if (pairs > 1) {
        variance = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    }

    McEstimate estimate;
    estimate.mean = mean;
    estimate.std_error = std::sqrt(variance / n);
    estimate.paths = 2 * pairs;
    estimate.seed = options.seed;
    return estimate;
}

void write_mc_csv(std::ostream& out, const McEstimate& estimate, double seconds) {
    out << "mean,stderr,paths,seed,seconds\n";
    out << format_double(estimate.mean) << ',' << format_double(estimate.std_error) << ','
        << format_int(estimate.paths) << ',' << format_int(static_cast<long long>(estimate.seed))
        << ',' << format_double(seconds) << '\n';
}

void write_mc_path_dump(std::ostream& out, const RegimeOUModel& model, const PayoffSpec& payoff,
                        const PricingQuery& query, std::int64_t paths, std::uint64_t seed) {
    out << "path_index,n_jumps,x_T,discount,payoff\n";
    for (std::int64_t p = 0; p < (paths + 1) / 2; ++p) {
        const std::uint64_t pair_index = static_cast<std::uint64_t>(p);
        RngStream regime_stream(seed, pair_index, kRegimeStream);
        const RegimePath path = simulate_regime_path(model.generator(), query.t, model.horizon(),
                                                     query.regime, regime_stream);
        for (int half = 0; half < 2; ++half) {
            RngStream gauss(seed, pair_index, kGaussianStream);
            const auto [x_t, discount] =
                simulate_x_on_path(model, path, query.x, gauss, half == 1);
            out << format_int(2 * p + half) << ','
                << format_int(static_cast<long long>(path.jump_times.size())) << ','
                << format_double(x_t) << ',' << format_double(discount) << ','
                << format_double(payoff(x_t, path.terminal_regime())) << '\n';
        }
    }
}

}  // namespace fkswitch
