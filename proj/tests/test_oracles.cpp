#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace fkswitch;
using namespace fkswitch::test;

// The reference implementations get their own sanity checks against
// published constants and closed forms before anything trusts them.

TEST_CASE("erf series matches published constants") {
    CHECK(std::abs(static_cast<double>(erf_series(1.0L)) - 0.84270079294971486934) < 1e-15);
    CHECK(std::abs(static_cast<double>(erf_series(0.5L)) - 0.52049987781304653768) < 1e-15);
    CHECK(std::abs(static_cast<double>(erf_series(-1.0L)) + 0.84270079294971486934) < 1e-15);
    CHECK(static_cast<double>(erf_series(0.0L)) == 0.0);
}

TEST_CASE("normal cdf series hits the 97.5% quantile") {
    // z such that Phi(z) = 0.975, quoted to 15 digits.
    const long double z975 = 1.959963984540054L;
    CHECK(std::abs(static_cast<double>(normal_cdf_series(z975)) - 0.975) < 1e-14);
    CHECK(std::abs(static_cast<double>(normal_cdf_series(0.0L)) - 0.5) < 1e-18);
    CHECK(std::abs(static_cast<double>(normal_cdf_series(1.0L)) - 0.841344746068543) < 1e-14);
}

TEST_CASE("uniformization reproduces the symmetric two-state jump mean") {
    // Symmetric two-state chain jumps at constant rate q: E[N] = q T exactly.
    for (double q : {0.5, 1.0, 3.0}) {
        const auto gen = two_regime_generator(q, q);
        const double expected = expected_jumps_uniformization(gen, 1.0, 0);
        CHECK(std::abs(expected - q) < 1e-12);
    }
}

TEST_CASE("uniformization handles the absorbing chain") {
    CHECK(expected_jumps_uniformization(single_regime_generator(), 1.0, 0) == 0.0);
    // One-way chain 1 -> 2 with rate q and absorbing 2:
    // E[N] = P(jump before T) = 1 - exp(-q T).
    const auto gen = GeneratorMatrix::validate({{-2.0, 2.0}, {0.0, 0.0}});
    const double expected = expected_jumps_uniformization(gen, 1.0, 0);
    CHECK(std::abs(expected - (1.0 - std::exp(-2.0))) < 1e-12);
}

TEST_CASE("ks distance on disjoint and identical samples") {
    CHECK(ks_distance({1.0, 2.0, 3.0}, {10.0, 11.0, 12.0}) == doctest::Approx(1.0));
    CHECK(ks_distance({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == doctest::Approx(0.0));
}

TEST_CASE("trapezoid integrates a unit gaussian") {
    const double mass = trapezoid(
        [](double y) { return std::exp(-0.5 * y * y) / std::sqrt(2.0 * 3.14159265358979323846); },
        -12.0, 12.0, 4000);
    CHECK(std::abs(mass - 1.0) < 1e-13);
}
