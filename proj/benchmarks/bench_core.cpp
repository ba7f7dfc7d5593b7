#include <benchmark/benchmark.h>

#include "fkswitch/grid.hpp"
#include "fkswitch/model.hpp"
#include "fkswitch/monte_carlo.hpp"
#include "fkswitch/normal.hpp"
#include "fkswitch/ou_analytics.hpp"
#include "fkswitch/pde.hpp"
#include "fkswitch/picard.hpp"
#include "fkswitch/quadrature.hpp"
#include "fkswitch/rng.hpp"
#include "fkswitch/tridiagonal.hpp"

#include <vector>

namespace {

using namespace fkswitch;

RegimeOUModel bench_model() {
    return RegimeOUModel::build(0.8, std::nullopt, {0.2, 0.5}, {0.03, 0.06}, 1.0,
                                GeneratorMatrix::validate({{-1.0, 1.0}, {2.0, -2.0}}), true);
}

void BM_NormalCdf(benchmark::State& state) {
    double z = -6.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(normal_cdf(z));
        z += 1e-4;
        if (z > 6.0) z = -6.0;
    }
}
BENCHMARK(BM_NormalCdf);

void BM_CallClosedForm(benchmark::State& state) {
    const auto model = bench_model();
    double x = -1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(v0_call(model, 1.0, 0.25, x, 0));
        x += 1e-3;
        if (x > 1.0) x = -1.0;
    }
}
BENCHMARK(BM_CallClosedForm);

void BM_GaussHermiteRule(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(gauss_hermite(order));
    }
}
BENCHMARK(BM_GaussHermiteRule)->Arg(16)->Arg(64)->Arg(128);

void BM_SwitchingOperator(benchmark::State& state) {
    const auto model = bench_model();
    const auto spec = GridSpec::automatic(model, 0.0, static_cast<std::size_t>(state.range(0)),
                                          static_cast<std::size_t>(state.range(1)));
    GridFunction h(spec);
    RngStream stream(1, 0, 0);
    for (double& v : h.data()) v = stream.uniform();
    const auto damp = DampeningSpec::ou_call();
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_switching_operator(model, damp, h));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(h.data().size()));
}
BENCHMARK(BM_SwitchingOperator)->Args({17, 101})->Args({33, 401})->Unit(benchmark::kMillisecond);

void BM_PicardSolve(benchmark::State& state) {
    const auto model = bench_model();
    const auto spec = GridSpec::automatic(model, 0.0, 17, 101);
    const auto payoff = PayoffSpec::call(1.0);
    const auto damp = DampeningSpec::ou_call();
    for (auto _ : state) {
        benchmark::DoNotOptimize(picard_solve(model, payoff, damp, spec));
    }
}
BENCHMARK(BM_PicardSolve)->Unit(benchmark::kMillisecond);

void BM_McPrice(benchmark::State& state) {
    const auto model = bench_model();
    const auto payoff = PayoffSpec::call(1.0);
    const PricingQuery query{0.0, 0.0, 0};
    McOptions options;
    options.paths = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc_price(model, payoff, query, options));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McPrice)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_PdeSolve(benchmark::State& state) {
    const auto model = bench_model();
    const auto payoff = PayoffSpec::call(1.0);
    const PdeParams params = PdeParams::automatic(model, 0.0, 1e-2, 0.02);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pde_solve(model, payoff, params));
    }
}
BENCHMARK(BM_PdeSolve)->Unit(benchmark::kMillisecond);

void BM_Tridiagonal(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<double> sub(n, -1.0), diag(n, 4.0), super(n, -1.0), rhs(n, 1.0), solution(n);
    std::vector<double> scratch;
    for (auto _ : state) {
        solve_tridiagonal(sub, diag, super, rhs, solution, scratch);
        benchmark::DoNotOptimize(solution.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Tridiagonal)->Arg(256)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
