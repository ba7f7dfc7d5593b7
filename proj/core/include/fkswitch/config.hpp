#pragma once

#include "fkswitch/model.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace fkswitch {

/// Optional [run] keys; the CLI mirrors each as a flag and wins on conflict.
struct RunOverrides {
    std::optional<double> t;
    std::optional<double> x;
    std::optional<int> regime;  // 1-based as written by users
    std::optional<double> tol;
    std::optional<long> max_iter;
    std::optional<long long> paths;
    std::optional<std::uint64_t> seed;
    std::optional<long> nt;
    std::optional<long> nx;
    std::optional<double> x_min;
    std::optional<double> x_max;
};

/// Fully validated problem description loaded from an INI-style file.
struct ProblemConfig {
    RegimeOUModel model;
    PayoffSpec payoff;
    DampeningSpec dampening;
    Tolerances tolerances;
    RunOverrides run;
    std::vector<std::string> warnings;
};

/// Sections: [model] (beta, theta?, sigma, r, T, derive_theta), [generator]
/// (row_1..row_m), [payoff] (kind = call|constant|custom, strike, level,
/// custom_x, custom_y, bound), [dampening] (kind = unit|ou_call), plus the
/// optional [run] and [tolerances] sections. Lists are comma-separated,
/// comments start with '#', parsing never consults the locale.
ProblemConfig load_problem_config(const std::string& path);

ProblemConfig parse_problem_config(std::istream& in, const std::string& source_name);

}  // namespace fkswitch
