#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fkswitch/errors.hpp"
#include "fkswitch/monte_carlo.hpp"
#include "fkswitch/ou_analytics.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace fkswitch;
using namespace fkswitch::test;

namespace {

bool throws_named(const std::function<void()>& fn, const std::string& name) {
    try {
        fn();
    } catch (const Error& e) {
        return e.name() == name;
    }
    return false;
}

/// theta = 0 exactly: beta 1, sigma sqrt(2), r 1.
RegimeOUModel zero_theta_model(double horizon = 1.0) {
    return RegimeOUModel::build(1.0, std::nullopt, {std::sqrt(2.0)}, {1.0}, horizon,
                                single_regime_generator(), true);
}

}  // namespace

TEST_CASE("moments at zero elapsed time") {
    const auto model = single_regime_model();
    const auto m = ou_moments(model, 0.0, 0);
    CHECK(m.mean_shift == 0.0);
    CHECK(m.variance == 0.0);
    CHECK(m.decay == 1.0);
}

TEST_CASE("mean shift hand value at log(2)") {
    // beta 1, theta 0.5: m(ln 2) = 0.5 * (1 - 1/2) = 0.25.
    const auto model = RegimeOUModel::unchecked(1.0, {0.5}, {0.2}, {0.05}, 1.0,
                                                single_regime_generator());
    const auto m = ou_moments(model, std::log(2.0), 0);
    CHECK(m.mean_shift == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(m.decay == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("variance saturates at the stationary level") {
    const auto model = RegimeOUModel::build(1.0, std::nullopt, {0.2}, {0.05}, 100.0,
                                            single_regime_generator(), true);
    const auto m = ou_moments(model, 50.0, 0);
    CHECK(std::abs(m.variance - 0.02) <= 1e-12);
}

TEST_CASE("moment monotonicity over elapsed time") {
    const auto model = single_regime_model();
    const double cap = model.sigma(0) * model.sigma(0) / (2.0 * model.beta());
    double prev_var = 0.0;
    double prev_abs_mean = 0.0;
    for (double s = 0.05; s <= 5.0; s += 0.05) {
        const auto m = ou_moments(model, s, 0);
        CHECK(m.variance >= prev_var);
        CHECK(std::abs(m.mean_shift) >= prev_abs_mean);
        CHECK(m.variance < cap);
        prev_var = m.variance;
        prev_abs_mean = std::abs(m.mean_shift);
    }
    CHECK(throws_named([&] { ou_moments(model, -0.1, 0); }, "NegativeElapsed"));
}

TEST_CASE("density peak and hand-computed variance") {
    const auto model = zero_theta_model();
    // elapsed log 2: variance = 1 - exp(-2 ln 2) = 0.75, mean 0.
    const double f0 = transition_density(model, std::log(2.0), 0.0, 0.0, 0.0, 0);
    CHECK(f0 == doctest::Approx(1.0 / std::sqrt(2.0 * 3.14159265358979323846 * 0.75))
                    .epsilon(1e-14));
    CHECK(throws_named([&] { transition_density(model, 0.5, 0.0, 0.5, 0.0, 0); },
                       "NonPositiveElapsed"));
}

TEST_CASE("density integrates to one") {
    const auto model = single_regime_model();
    const double x = 0.3;
    for (double elapsed : {0.05, 0.3, 0.9}) {
        const auto m = ou_moments(model, elapsed, 0);
        const double mean = x * m.decay + m.mean_shift;
        const double nu = std::sqrt(m.variance);
        const double mass = trapezoid(
            [&](double y) { return transition_density(model, elapsed, y, 0.0, x, 0); },
            mean - 12.0 * nu, mean + 12.0 * nu, 4000);
        CHECK(std::abs(mass - 1.0) <= 1e-10);
    }
}

TEST_CASE("density satisfies the forward equation to finite-difference accuracy") {
    const auto model = zero_theta_model(2.0);
    const double delta = 1e-3;
    const double t = 0.0;
    const double x = 0.3;
    const double beta = model.beta();
    const double theta = model.theta(0);
    const double sig2 = model.sigma(0) * model.sigma(0);

    const auto f = [&](double u, double y) {
        return transition_density(model, u, y, t, x, 0);
    };
    const auto drift = [&](double y) { return beta * (theta - y); };

    for (double u : {0.3, 0.5, 0.8, 1.2}) {
        const auto m = ou_moments(model, u - t, 0);
        const double mean = x * m.decay + m.mean_shift;
        const double nu = std::sqrt(m.variance);
        const double peak = 1.0 / std::sqrt(2.0 * 3.14159265358979323846 * m.variance);
        for (double k = -2.0; k <= 2.0; k += 0.5) {
            const double y = mean + k * nu;
            const double df_du = (f(u + delta, y) - f(u - delta, y)) / (2.0 * delta);
            const double d_drift =
                (drift(y + delta) * f(u, y + delta) - drift(y - delta) * f(u, y - delta)) /
                (2.0 * delta);
            const double d2f =
                (f(u, y + delta) - 2.0 * f(u, y) + f(u, y - delta)) / (delta * delta);
            const double residual = df_du + d_drift - 0.5 * sig2 * d2f;
            CHECK(std::abs(residual) / peak <= 1e-4);
        }
    }
}

TEST_CASE("density composes over an intermediate time") {
    const auto model = single_regime_model();
    const double t = 0.0;
    const double s = 0.4;
    const double u = 0.9;
    const double x = 0.2;

    const auto mid = ou_moments(model, s - t, 0);
    const double mid_mean = x * mid.decay + mid.mean_shift;
    const double mid_nu = std::sqrt(mid.variance);

    const auto full = ou_moments(model, u - t, 0);
    const double full_mean = x * full.decay + full.mean_shift;
    const double full_nu = std::sqrt(full.variance);

    for (double k = -2.0; k <= 2.0; k += 1.0) {
        const double y = full_mean + k * full_nu;
        const double composed = trapezoid(
            [&](double z) {
                return transition_density(model, u, y, s, z, 0) *
                       transition_density(model, s, z, t, x, 0);
            },
            mid_mean - 12.0 * mid_nu, mid_mean + 12.0 * mid_nu, 6000);
        const double direct = transition_density(model, u, y, t, x, 0);
        CHECK(std::abs(composed - direct) <= 1e-8);
    }
}

TEST_CASE("call value reduces to the payoff at the horizon") {
    const auto model = single_regime_model();
    const double x = std::log(2.0);  // strike 1: payoff = 2 - 1 = 1
    CHECK(v0_call(model, 1.0, 1.0, x, 0) == doctest::Approx(1.0));
    CHECK(v0_call(model, 1.0, 1.0, -1.0, 0) == 0.0);
}

TEST_CASE("call value approaches the discounted forward as the strike vanishes") {
    const auto model = single_regime_model();
    const double t = 0.0;
    const double x = 0.0;
    const auto m = ou_moments(model, 1.0, 0);
    const double forward =
        std::exp(-model.rate(0)) * std::exp(x * m.decay + m.mean_shift + 0.5 * m.variance);
    const double value = v0_call(model, 1e-12, t, x, 0);
    CHECK(std::abs(value - forward) / forward <= 1e-6);
    CHECK(throws_named([&] { v0_call(model, 0.0, 0.0, 0.0, 0); }, "StrikeNonPositive"));
}

TEST_CASE("closed-form terms keep d1 - d2 = nu") {
    const auto model = benchmark_two_regime_model();
    for (std::size_t i = 0; i < 2; ++i) {
        for (double t : {0.0, 0.4, 0.9}) {
            const auto terms = call_closed_form_terms(model, 1.0, t, 0.1, i);
            const auto m = ou_moments(model, model.horizon() - t, i);
            CHECK(terms.d1 - terms.d2 == doctest::Approx(std::sqrt(m.variance)).epsilon(1e-14));
        }
    }
}

TEST_CASE("call value monotonicity and arbitrage bounds") {
    const auto model = single_regime_model();
    const double t = 0.2;
    double prev = 0.0;
    for (double x = -1.5; x <= 1.5; x += 0.05) {
        const double v = v0_call(model, 1.0, t, x, 0);
        CHECK(v >= prev);
        const auto m = ou_moments(model, model.horizon() - t, 0);
        const double discount = std::exp(-model.rate(0) * (model.horizon() - t));
        const double forward = std::exp(x * m.decay + m.mean_shift + 0.5 * m.variance);
        CHECK(v >= std::max(0.0, discount * (forward - 1.0)) - 1e-15);
        prev = v;
    }
    // nonincreasing in strike
    double prev_k = v0_call(model, 0.5, t, 0.0, 0);
    for (double strike = 0.6; strike <= 2.0; strike += 0.1) {
        const double v = v0_call(model, strike, t, 0.0, 0);
        CHECK(v <= prev_k + 1e-15);
        prev_k = v;
    }
}

TEST_CASE("call value matches direct quadrature of the density") {
    const auto model = benchmark_two_regime_model();
    for (std::size_t i = 0; i < 2; ++i) {
        for (double t : {0.0, 0.5}) {
            for (double x : {-0.3, 0.0, 0.4}) {
                const double tau = model.horizon() - t;
                const auto m = ou_moments(model, tau, i);
                const double mean = x * m.decay + m.mean_shift;
                const double nu = std::sqrt(m.variance);
                const double quadrature =
                    std::exp(-model.rate(i) * tau) *
                    trapezoid(
                        [&](double y) {
                            return std::max(std::exp(y) - 1.0, 0.0) *
                                   transition_density(model, model.horizon(), y, t, x, i);
                        },
                        mean - 14.0 * nu, mean + 14.0 * nu, 12000);
                CHECK(v0_call(model, 1.0, t, x, i) ==
                      doctest::Approx(quadrature).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("dampening expectation matches direct quadrature of the density") {
    const auto model = benchmark_two_regime_model();
    const auto oucall = DampeningSpec::ou_call();
    const double t = 0.2;
    const double x = 0.3;
    for (std::size_t i = 0; i < 2; ++i) {
        for (double u : {0.4, 0.7, 1.0}) {
            const auto m = ou_moments(model, u - t, i);
            const double mean = x * m.decay + m.mean_shift;
            const double nu = std::sqrt(m.variance);
            const double quadrature = trapezoid(
                [&](double y) {
                    return oucall.value(model, u, y) *
                           transition_density(model, u, y, t, x, i);
                },
                mean - 14.0 * nu, mean + 14.0 * nu, 12000);
            CHECK(dampening_conditional_expectation(model, oucall, t, x, u, i) ==
                  doctest::Approx(quadrature).epsilon(1e-10));
        }
    }
}

TEST_CASE("call value matches simulation under frozen dynamics") {
    const auto model = single_regime_model();
    const auto payoff = PayoffSpec::call(1.0);
    const PricingQuery query{0.0, 0.0, 0};
    McOptions options;
    options.paths = 1'000'000;
    options.seed = 91;
    const McEstimate estimate = mc_price(model, payoff, query, options);
    const double closed_form = v0_call(model, 1.0, 0.0, 0.0, 0);
    CHECK(std::abs(estimate.mean - closed_form) <= 3.0 * estimate.std_error);
}

TEST_CASE("no-switching term for the constant payoff is the holding probability") {
    const auto model = constant_payoff_model();  // q = (1, 2), r = 0
    const auto payoff = PayoffSpec::constant(1.0);
    const auto unit = DampeningSpec::unit();
    CHECK(h0_term(model, payoff, unit, 0.0, 0.3, 0) == doctest::Approx(std::exp(-1.0)));
    CHECK(h0_term(model, payoff, unit, 0.0, 0.3, 1) == doctest::Approx(std::exp(-2.0)));
    CHECK(h0_term(model, payoff, unit, 0.3, -1.0, 0) == doctest::Approx(std::exp(-0.7)));
}

TEST_CASE("no-switching term reduces to the closed form without switching") {
    const auto model = single_regime_model();
    const auto payoff = PayoffSpec::call(1.0);
    const auto unit = DampeningSpec::unit();
    for (double t : {0.0, 0.3, 0.8}) {
        for (double x : {-0.5, 0.0, 0.4}) {
            CHECK(h0_term(model, payoff, unit, t, x, 0) ==
                  doctest::Approx(v0_call(model, 1.0, t, x, 0)).epsilon(1e-14));
        }
    }
}

TEST_CASE("no-switching term handles tabulated payoffs by quadrature") {
    // A flat custom table must reproduce the constant payoff exactly.
    const auto model = constant_payoff_model();
    const auto flat = PayoffSpec::bounded_custom({-5.0, 5.0}, {1.0, 1.0}, 1.0);
    const auto unit = DampeningSpec::unit();
    CHECK(h0_term(model, flat, unit, 0.0, 0.0, 0) == doctest::Approx(std::exp(-1.0)));

    // A finely tabulated smooth payoff against an independent quadrature.
    const auto single = single_regime_model();
    std::vector<double> xs, ys;
    for (int k = 0; k <= 600; ++k) {
        const double x = -3.0 + 6.0 * k / 600.0;
        xs.push_back(x);
        ys.push_back(0.4 * (1.0 + std::tanh(2.0 * x)));
    }
    const auto smooth = PayoffSpec::bounded_custom(xs, ys, 0.8);
    const double x0 = 0.1;
    const double got = h0_term(single, smooth, unit, 0.0, x0, 0);
    const double expected =
        std::exp(-single.rate(0)) *
        trapezoid(
            [&](double y) {
                return smooth(y, 0) * transition_density(single, 1.0, y, 0.0, x0, 0);
            },
            -3.0, 3.0, 8000);
    CHECK(std::abs(got - expected) <= 1e-6);
}

TEST_CASE("conditional dampening expectation endpoints") {
    const auto model = single_regime_model();
    const auto oucall = DampeningSpec::ou_call();
    // degenerate conditioning: expectation collapses to D itself
    for (double x : {-1.0, 0.0, 0.7}) {
        for (double t : {0.0, 0.4, 1.0}) {
            CHECK(dampening_conditional_expectation(model, oucall, t, x, t, 0) ==
                  doctest::Approx(oucall.value(model, t, x)).epsilon(1e-15));
        }
    }
    // zero-theta model at the horizon from x = 0: exp(variance / 2)
    const auto zero_theta = RegimeOUModel::build(1.0, std::nullopt, {std::sqrt(2.0)}, {1.0}, 1.0,
                                                 single_regime_generator(), true);
    const auto m = ou_moments(zero_theta, 0.8, 0);
    CHECK(dampening_conditional_expectation(zero_theta, oucall, 0.2, 0.0, 1.0, 0) ==
          doctest::Approx(std::exp(0.5 * m.variance)).epsilon(1e-14));
    CHECK(throws_named(
        [&] { dampening_conditional_expectation(model, oucall, 0.5, 0.0, 0.2, 0); },
        "TimeOrderViolation"));
}

TEST_CASE("dampening expectation obeys the growth inequality on a grid") {
    const auto model = single_regime_model();
    const auto oucall = DampeningSpec::ou_call();
    const double horizon = model.horizon();
    for (int a = 0; a < 20; ++a) {
        const double t = horizon * a / 20.0;
        for (int b = 0; b < 20; ++b) {
            const double u = t + (horizon - t) * b / 19.0;
            for (double x : {-1.0, 0.0, 1.0}) {
                const double lhs = dampening_conditional_expectation(model, oucall, t, x, u, 0);
                const double rhs =
                    oucall.value(model, t, x) * std::exp(model.rate(0) * (u - t));
                CHECK(lhs <= rhs * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("certificate passes for consistent models") {
    for (const auto& model : {single_regime_model(), benchmark_two_regime_model()}) {
        const auto points = default_certificate_points(model, -1.6, 1.6);
        for (std::size_t i = 0; i < model.regimes(); ++i) {
            const auto report =
                supermartingale_certificate(model, DampeningSpec::ou_call(), points, i);
            CHECK(report.pass);
            CHECK(report.max_relative_violation <= 1e-12);
        }
    }
}

TEST_CASE("certificate also passes for unit dampening") {
    const auto model = single_regime_model();
    const auto points = default_certificate_points(model, -1.6, 1.6);
    const auto report = supermartingale_certificate(model, DampeningSpec::unit(), points, 0);
    CHECK(report.pass);
}

TEST_CASE("certificate margin is exactly zero at degenerate conditioning") {
    const auto model = single_regime_model();
    std::vector<CertificatePoint> points;
    for (double t : {0.0, 0.3, 0.9}) {
        for (double x : {-1.0, 0.5}) {
            points.push_back({t, t, x});
        }
    }
    const auto report =
        supermartingale_certificate(model, DampeningSpec::ou_call(), points, 0);
    CHECK(report.pass);
    CHECK(report.max_relative_violation == 0.0);
}

TEST_CASE("certificate rejects a model with an inflated long-run mean") {
    // theta ten times the consistent value, range checks bypassed.
    const auto broken = RegimeOUModel::unchecked(0.5, {0.1}, {0.2}, {0.05}, 1.0,
                                                 single_regime_generator());
    const auto points = default_certificate_points(broken, -1.6, 1.6);
    const auto report =
        supermartingale_certificate(broken, DampeningSpec::ou_call(), points, 0);
    CHECK(!report.pass);
    CHECK(report.max_relative_violation > 1e-6);
    CHECK(throws_named(
        [&] { require_supermartingale(broken, DampeningSpec::ou_call(), points, 0); },
        "CertificateFailed"));
}

TEST_CASE("certificate report serializes to csv") {
    const auto model = single_regime_model();
    const auto points = default_certificate_points(model, -1.0, 1.0, 3, 3, 3);
    const auto report =
        supermartingale_certificate(model, DampeningSpec::ou_call(), points, 0);
    std::ostringstream out;
    write_certificate_csv(out, report);
    const std::string text = out.str();
    CHECK(text.starts_with("t,u,x,lhs,rhs,margin\n"));
    std::size_t lines = 0;
    for (char c : text) {
        if (c == '\n') ++lines;
    }
    CHECK(lines == 1 + 27);
}
