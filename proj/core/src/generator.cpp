#include "fkswitch/generator.hpp"

#include "fkswitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fkswitch {

GeneratorMatrix GeneratorMatrix::validate(const std::vector<std::vector<double>>& rates,
                                          double row_sum_tol) {
    const std::size_t m = rates.size();
    if (m == 0) {
        throw_config("NonSquare", "rate matrix is empty");
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (rates[i].size() != m) {
            throw_config("NonSquare", "row " + std::to_string(i + 1) + " has " +
                                          std::to_string(rates[i].size()) + " entries, expected " +
                                          std::to_string(m));
        }
    }

    std::vector<double> flat(m * m);
    std::vector<double> holding(m);
    for (std::size_t i = 0; i < m; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double q = rates[i][j];
            if (i != j && q < 0.0) {
                throw_config("NegativeOffDiagonal",
                             "rate (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                 ") = " + std::to_string(q) + " is negative");
            }
            flat[i * m + j] = q;
            row_sum += q;
        }
        if (std::abs(row_sum) > row_sum_tol) {
            throw_config("RowSumNonZero", "row " + std::to_string(i + 1) + " sums to " +
                                              std::to_string(row_sum));
        }
        holding[i] = std::max(0.0, -rates[i][i]);
    }
    return GeneratorMatrix(m, std::move(flat), std::move(holding));
}

double GeneratorMatrix::max_holding_rate() const {
    return *std::max_element(holding_.begin(), holding_.end());
}

}  // namespace fkswitch
