#pragma once

#include <cstddef>
#include <vector>

namespace fkswitch {

/// Validated transition-rate matrix of a finite-state continuous-time
/// Markov chain. Off-diagonal entries are nonnegative jump intensities,
/// every row sums to zero, and holding_rate(i) = -rate(i,i) >= 0 is the
/// total intensity of leaving state i.
class GeneratorMatrix {
public:
    /// Checks a square rate array and derives holding rates.
    /// Throws Error{NonSquare, NegativeOffDiagonal, RowSumNonZero}.
    static GeneratorMatrix validate(const std::vector<std::vector<double>>& rates,
                                    double row_sum_tol = 1e-12);

    std::size_t size() const noexcept { return size_; }
    double rate(std::size_t i, std::size_t j) const { return rates_[i * size_ + j]; }
    double holding_rate(std::size_t i) const { return holding_[i]; }
    const std::vector<double>& holding_rates() const noexcept { return holding_; }
    double max_holding_rate() const;

private:
    GeneratorMatrix(std::size_t size, std::vector<double> rates, std::vector<double> holding)
        : size_(size), rates_(std::move(rates)), holding_(std::move(holding)) {}

    std::size_t size_ = 0;
    std::vector<double> rates_;    // row-major size_ x size_
    std::vector<double> holding_;  // clamped at zero against roundoff
};

}  // namespace fkswitch
