#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fkswitch/normal.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace fkswitch;
using namespace fkswitch::test;

TEST_CASE("cdf agrees with the series oracle to 1e-12") {
    const double points[] = {-8.0, -6.0, -5.0, -4.0,  -3.0, -2.5, -2.0, -1.5, -1.0, -0.5,
                             0.0,  0.5,  1.0,  1.959963985, 2.0, 2.5,  3.0,  4.0,  5.0, 6.0};
    for (double z : points) {
        const double expected = static_cast<double>(normal_cdf_series(z));
        CHECK(std::abs(normal_cdf(z) - expected) <= 1e-12);
    }
}

TEST_CASE("quantile and symmetry anchors") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(std::abs(normal_cdf(1.959963985) - 0.975) < 1e-9);
    CHECK(std::abs(normal_cdf(40.0) - 1.0) < 1e-15);
    CHECK(normal_cdf(-40.0) == 0.0);
}

TEST_CASE("cdf symmetry across the sign sweep") {
    for (double z = -10.0; z <= 10.0; z += 0.0625) {
        CHECK(std::abs(normal_cdf(z) + normal_cdf(-z) - 1.0) <= 1e-14);
    }
}

TEST_CASE("cdf is nondecreasing") {
    double prev = 0.0;
    for (double z = -12.0; z <= 12.0; z += 0.03125) {
        const double v = normal_cdf(z);
        CHECK(v >= prev);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("erfc branch agrees with the standard library") {
    for (double x = -9.0; x <= 9.0; x += 0.03125) {
        CHECK(std::abs(erfc_rational(x) - std::erfc(x)) <=
              1e-13 * std::max(std::erfc(x), 1e-300) + 1e-17);
    }
}

TEST_CASE("pdf normalizes and peaks correctly") {
    CHECK(normal_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * 3.14159265358979323846)));
    const double mass = trapezoid([](double z) { return normal_pdf(z); }, -12.0, 12.0, 4000);
    CHECK(std::abs(mass - 1.0) < 1e-13);
}
