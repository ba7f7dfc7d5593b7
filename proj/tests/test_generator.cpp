#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fkswitch/errors.hpp"
#include "fkswitch/generator.hpp"
#include "fkswitch/rng.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

using namespace fkswitch;

namespace {

bool throws_named(const std::function<void()>& fn, const std::string& name) {
    try {
        fn();
    } catch (const Error& e) {
        return e.name() == name;
    }
    return false;
}

}  // namespace

TEST_CASE("two-regime generator derives holding rates") {
    const auto gen = GeneratorMatrix::validate({{-1.0, 1.0}, {2.0, -2.0}});
    CHECK(gen.size() == 2);
    CHECK(gen.holding_rate(0) == doctest::Approx(1.0));
    CHECK(gen.holding_rate(1) == doctest::Approx(2.0));
    CHECK(gen.rate(0, 1) == 1.0);
    CHECK(gen.rate(1, 0) == 2.0);
    CHECK(gen.max_holding_rate() == doctest::Approx(2.0));
}

TEST_CASE("single absorbing regime is valid") {
    const auto gen = GeneratorMatrix::validate({{0.0}});
    CHECK(gen.size() == 1);
    CHECK(gen.holding_rate(0) == 0.0);
}

TEST_CASE("row sum violations are rejected") {
    CHECK(throws_named([] { GeneratorMatrix::validate({{-1.0, 0.5}, {1.0, -1.0}}); },
                       "RowSumNonZero"));
}

TEST_CASE("negative off-diagonal rates are rejected") {
    CHECK(throws_named([] { GeneratorMatrix::validate({{1.0, -1.0}, {1.0, -1.0}}); },
                       "NegativeOffDiagonal"));
}

TEST_CASE("non-square and empty arrays are rejected") {
    CHECK(throws_named([] { GeneratorMatrix::validate({{0.0, 0.0}, {0.0}}); }, "NonSquare"));
    CHECK(throws_named([] { GeneratorMatrix::validate({}); }, "NonSquare"));
}

TEST_CASE("row sum tolerance is adjustable") {
    const std::vector<std::vector<double>> rates = {{-1.0 + 1e-10, 1.0}, {2.0, -2.0}};
    CHECK(throws_named([&] { GeneratorMatrix::validate(rates); }, "RowSumNonZero"));
    const auto gen = GeneratorMatrix::validate(rates, 1e-9);
    CHECK(gen.holding_rate(0) == doctest::Approx(1.0));
}

TEST_CASE("random valid generators keep their invariants") {
    RngStream stream(7, 0, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(stream.next_u64() % 4);
        std::vector<std::vector<double>> rates(m, std::vector<double>(m, 0.0));
        for (std::size_t i = 0; i < m; ++i) {
            double off = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                if (i == j) continue;
                rates[i][j] = 3.0 * stream.uniform();
                off += rates[i][j];
            }
            rates[i][i] = -off;
        }
        const auto gen = GeneratorMatrix::validate(rates);
        for (std::size_t i = 0; i < m; ++i) {
            double row_sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) row_sum += gen.rate(i, j);
            CHECK(std::abs(row_sum) <= 1e-12);
            CHECK(gen.holding_rate(i) >= 0.0);
        }
    }
}
