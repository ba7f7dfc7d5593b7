#include "fkswitch/comparison.hpp"

#include <algorithm>
#include <cmath>

namespace fkswitch {

ComparisonResult compare_methods(const MethodValues& values, const ComparisonBudget& budget) {
    ComparisonResult result;
    result.mc_tolerance = budget.mc_z * values.mc_std_error + values.picard_bound;
    result.pde_tolerance =
        values.picard_bound + budget.pde_relative * std::max(1.0, std::abs(values.picard));
    result.picard_mc_agree = std::abs(values.picard - values.mc_mean) <= result.mc_tolerance;
    result.picard_pde_agree = std::abs(values.picard - values.pde) <= result.pde_tolerance;
    result.all_agree = result.picard_mc_agree && result.picard_pde_agree;
    return result;
}

}  // namespace fkswitch
