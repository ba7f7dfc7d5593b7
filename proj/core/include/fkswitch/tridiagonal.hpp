#pragma once

#include <span>
#include <vector>

namespace fkswitch {

/// Thomas algorithm for A x = d with sub/main/super diagonals (a, b, c);
/// a[0] and c[n-1] are ignored. No pivoting: callers supply diagonally
/// dominant systems.
void solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> super, std::span<const double> rhs,
                       std::span<double> solution, std::vector<double>& scratch);

}  // namespace fkswitch
