#pragma once

#include "fkswitch/model.hpp"
#include "fkswitch/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fkswitch {

/// One realized regime trajectory over [t, T]: jump times, visited regimes,
/// and the holding segments they induce. Segments partition [t, T] exactly.
struct RegimePath {
    struct Segment {
        double start;
        double end;
        std::size_t regime;
    };

    std::vector<double> jump_times;
    std::vector<std::size_t> regimes;  // starts with the initial regime
    std::vector<Segment> segments;

    std::size_t terminal_regime() const { return regimes.back(); }
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t paths = 0;
    std::uint64_t seed = 0;
};

struct McOptions {
    std::int64_t paths = 1'000'000;
    std::uint64_t seed = 20240229;
    int threads = 0;  // 0 = automatic
};

/// Samples holding times and jump targets of the chain until the horizon.
/// A zero holding rate is an absorbing state and yields a single segment.
RegimePath simulate_regime_path(const GeneratorMatrix& generator, double t, double horizon,
                                std::size_t start, RngStream& stream);

/// Advances the log-price across the path segments with exact Gaussian
/// transitions (no time-stepping bias) and accumulates the piecewise
/// discount. sign_flip negates every Gaussian draw (antithetic partner).
/// Returns (terminal log-price, discount factor).
std::pair<double, double> simulate_x_on_path(const RegimeOUModel& model, const RegimePath& path,
                                             double x0, RngStream& gaussians,
                                             bool sign_flip = false);

/// Discounted-payoff average over antithetic pairs that share the regime
/// path and mirror the Gaussian draws. The standard error treats pair
/// averages as the independent samples. paths is rounded up to an even
/// count; results are bit-identical for any worker count.
McEstimate mc_price(const RegimeOUModel& model, const PayoffSpec& payoff,
                    const PricingQuery& query, const McOptions& options = {});

/// Columns (mean, stderr, paths, seed, seconds).
void write_mc_csv(std::ostream& out, const McEstimate& estimate, double seconds);

/// Debug dump, one row per path: (path_index, n_jumps, x_T, discount, payoff).
void write_mc_path_dump(std::ostream& out, const RegimeOUModel& model, const PayoffSpec& payoff,
                        const PricingQuery& query, std::int64_t paths, std::uint64_t seed);

}  // namespace fkswitch
