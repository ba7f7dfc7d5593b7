#include "fkswitch/tridiagonal.hpp"

#include "fkswitch/errors.hpp"

namespace fkswitch {

void solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> super, std::span<const double> rhs,
                       std::span<double> solution, std::vector<double>& scratch) {
    const std::size_t n = diag.size();
    if (sub.size() != n || super.size() != n || rhs.size() != n || solution.size() != n ||
        n == 0) {
        throw_numeric("TridiagonalShapeMismatch", "all bands must have equal nonzero length");
    }
    scratch.resize(n);

    double pivot = diag[0];
    scratch[0] = super[0] / pivot;
    solution[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - sub[i] * scratch[i - 1];
        scratch[i] = super[i] / pivot;
        solution[i] = (rhs[i] - sub[i] * solution[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        solution[i] -= scratch[i] * solution[i + 1];
    }
}

}  // namespace fkswitch
