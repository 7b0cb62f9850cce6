#include <benchmark/benchmark.h>

#include <random>

#include "fracheat/estimates.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/rearrange.hpp"
#include "fracheat/solver.hpp"
#include "fracheat/zygmund.hpp"

using namespace fracheat;

namespace {

SampledFunction noise(const GridSpec& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(grid.size());
    for (auto& x : v) x = u(rng);
    return SampledFunction(grid, std::move(v));
}

void BM_Rearrange(benchmark::State& state) {
    const SampledFunction f = noise(make_grid(1, 8.0, static_cast<std::size_t>(state.range(0))), 1);
    for (auto _ : state) benchmark::DoNotOptimize(rearrange(f));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Rearrange)->RangeMultiplier(4)->Range(256, 1 << 16)->Complexity(benchmark::oNLogN);

void BM_FrakNorm(benchmark::State& state) {
    const Rearrangement r = rearrange(noise(make_grid(1, 8.0, static_cast<std::size_t>(state.range(0))), 2));
    for (auto _ : state) benchmark::DoNotOptimize(frak_norm(r, 1.0, 0.5));
}
BENCHMARK(BM_FrakNorm)->RangeMultiplier(4)->Range(256, 1 << 16);

void BM_SemigroupApply(benchmark::State& state) {
    const GridSpec g = make_grid(static_cast<int>(state.range(1)), 8.0, static_cast<std::size_t>(state.range(0)));
    const Semigroup s(g, 1.5);
    const SemigroupSymbol symbol = s.symbol_at(0.1);
    const SampledFunction f = noise(g, 3);
    for (auto _ : state) benchmark::DoNotOptimize(s.apply(symbol, f));
}
BENCHMARK(BM_SemigroupApply)->Args({512, 1})->Args({4096, 1})->Args({128, 2})->Args({512, 2});

void BM_DuhamelMap(benchmark::State& state) {
    SolverConfig cfg;
    cfg.kernel = KernelSpec::automatic(1, 2.0);
    cfg.grid = make_grid(1, 8.0, static_cast<std::size_t>(state.range(0)));
    cfg.T = 0.25;
    cfg.time_steps = 256;
    const CriticalSolver solver(cfg);
    const SampledFunction phi = scaled(phi_c(1, 2.0, cfg.grid), 0.1);
    const SolutionTrajectory u = solver.linear(phi);
    for (auto _ : state) benchmark::DoNotOptimize(solver.duhamel_map(phi, u));
}
BENCHMARK(BM_DuhamelMap)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
