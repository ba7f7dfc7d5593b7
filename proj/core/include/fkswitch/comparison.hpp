#pragma once

#include <cstddef>

namespace fkswitch {

/// Agreement budgets combining statistical and deterministic error terms:
/// the simulation band is z * stderr plus the iteration bound, the lattice
/// band the iteration bound plus a relative discretization allowance.
struct ComparisonBudget {
    double mc_z = 3.0;
    double pde_relative = 2e-3;
};

struct MethodValues {
    double picard = 0.0;
    double picard_bound = 0.0;  // a-posteriori bound of the iteration
    double mc_mean = 0.0;
    double mc_std_error = 0.0;
    double pde = 0.0;
};

struct ComparisonResult {
    double mc_tolerance = 0.0;
    double pde_tolerance = 0.0;
    bool picard_mc_agree = false;
    bool picard_pde_agree = false;
    bool all_agree = false;
};

ComparisonResult compare_methods(const MethodValues& values, const ComparisonBudget& budget = {});

}  // namespace fkswitch
