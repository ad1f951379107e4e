#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <mapfunc/cramer.hpp>
#include <mapfunc/sim.hpp>
#include <mapfunc/stats.hpp>

#include "test_models.hpp"

using namespace mapfunc;
using namespace mapfunc::testing;

namespace {

void BM_CycleBrownian(benchmark::State& state)
{
    auto const m = brownian(1.0);
    SimConfig cfg;
    cfg.gridStep = 1.0 / static_cast<double>(state.range(0));
    std::uint64_t i = 0;
    for (auto _ : state) {
        auto rng = family_stream(1, StreamFamily::Cycles, i++);
        benchmark::DoNotOptimize(sample_cycle(m, cfg, rng));
    }
}
BENCHMARK(BM_CycleBrownian)->Arg(100)->Arg(1000);

void BM_CycleParetoSwitch(benchmark::State& state)
{
    auto const m = pareto_switch(3.0);
    SimConfig cfg;
    std::uint64_t i = 0;
    for (auto _ : state) {
        auto rng = family_stream(1, StreamFamily::Cycles, i++);
        benchmark::DoNotOptimize(sample_cycle(m, cfg, rng));
    }
}
BENCHMARK(BM_CycleParetoSwitch);

void BM_FunctionalsPureDrift(benchmark::State& state)
{
    auto const m = pure_drift(-2.0, -1.0);
    SimConfig cfg;
    std::uint64_t i = 0;
    for (auto _ : state) {
        auto rng = family_stream(1, StreamFamily::Functionals, i++);
        benchmark::DoNotOptimize(sample_functionals(m, cfg, rng));
    }
}
BENCHMARK(BM_FunctionalsPureDrift);

void BM_FunctionalsBrownian(benchmark::State& state)
{
    auto const m = brownian(1.5);
    SimConfig cfg;
    cfg.gridStep = 1e-2;
    std::uint64_t i = 0;
    for (auto _ : state) {
        auto rng = family_stream(1, StreamFamily::Functionals, i++);
        benchmark::DoNotOptimize(sample_functionals(m, cfg, rng));
    }
}
BENCHMARK(BM_FunctionalsBrownian);

void BM_KsTwoSample(benchmark::State& state)
{
    auto const n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 g(3);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = e(g);
        b[i] = e(g);
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(ks_two_sample(a, b));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KsTwoSample)->RangeMultiplier(10)->Range(1000, 1000000)->Complexity(benchmark::oNLogN);

void BM_CramerRootGaussianJumps(benchmark::State& state)
{
    auto const m = two_state(levy(-1.0, 0.5), levy(-0.5, 1.0), JumpLaw::gaussian(0.3, 0.5),
                             JumpLaw::exp_positive(3.0), 1.0, 2.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(find_cramer_root(m));
}
BENCHMARK(BM_CramerRootGaussianJumps);

void BM_CramerRootPareto(benchmark::State& state)
{
    auto const m = two_state(levy(-1.0, 0.5), levy(-1.0), JumpLaw::pareto(3.0, 1.0).negated(),
                             JumpLaw::gaussian(0.2, 0.3));
    for (auto _ : state)
        benchmark::DoNotOptimize(find_cramer_root(m));
}
BENCHMARK(BM_CramerRootPareto);

}  // namespace

BENCHMARK_MAIN();
