// Throughput of the kernels that dominate the experiments.

#include <cmath>
#include <complex>
#include <vector>

#include <benchmark/benchmark.h>

#include "isqnls/evolution.hpp"
#include "isqnls/ground_state.hpp"
#include "isqnls/hardy_operator.hpp"

namespace {

using namespace isqnls;

Params const reference{3, 0.1, 2.0, 1.0};

GridPtr grid_of(std::size_t n, double r_min = 1e-6) {
    return RadialGrid::build(3, r_min, 120.0, n, geometric_stretch(r_min, 120.0, n));
}

ComplexRadialField gaussian(GridPtr const& grid) {
    return ComplexRadialField::from_function(grid, [](double r) { return std::complex<double>(std::exp(-r * r / 2), 0.0); });
}

void BM_ApplyHardy(benchmark::State& state) {
    auto grid = grid_of(static_cast<std::size_t>(state.range(0)));
    auto u = gaussian(grid);
    std::vector<std::complex<double>> out(u.size());
    for (auto _ : state) {
        apply_hardy(*grid, reference, u.values(), out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyHardy)->RangeMultiplier(4)->Range(1024, 16384);

void BM_FunctionalReport(benchmark::State& state) {
    auto grid = grid_of(static_cast<std::size_t>(state.range(0)));
    auto u = gaussian(grid);
    for (auto _ : state) benchmark::DoNotOptimize(functional_report(u, reference));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FunctionalReport)->RangeMultiplier(4)->Range(1024, 16384);

void BM_ConservativeStep(benchmark::State& state) {
    auto grid = grid_of(static_cast<std::size_t>(state.range(0)), 1e-10);
    auto u0 = gaussian(grid);
    ConservativeStepper stepper(reference, grid);
    std::vector<std::complex<double>> u(u0.values().begin(), u0.values().end());
    for (auto _ : state) {
        if (!stepper.advance(u, 1e-4)) state.SkipWithError("step did not converge");
    }
    state.counters["picard"] = stepper.last_iterations();
}
BENCHMARK(BM_ConservativeStep)->Arg(2048)->Arg(8192);

void BM_StrangStep(benchmark::State& state) {
    auto grid = grid_of(static_cast<std::size_t>(state.range(0)), 1e-10);
    auto u0 = gaussian(grid);
    StrangStepper stepper(reference, grid);
    std::vector<std::complex<double>> u(u0.values().begin(), u0.values().end());
    for (auto _ : state) stepper.advance(u, 1e-4);
}
BENCHMARK(BM_StrangStep)->Arg(2048)->Arg(8192);

void BM_GroundState(benchmark::State& state) {
    auto grid = grid_of(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_ground_state(reference, grid));
}
BENCHMARK(BM_GroundState)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_Shooting(benchmark::State& state) {
    auto grid = grid_of(4096);
    ShootingOptions opts;
    opts.r0 = grid->r_min();
    for (auto _ : state) benchmark::DoNotOptimize(shoot_ground_state(reference, grid, opts));
}
BENCHMARK(BM_Shooting)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
