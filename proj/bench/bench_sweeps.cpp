#include <benchmark/benchmark.h>

#include "mdclab/params.hpp"
#include "mdclab/qsurface.hpp"
#include "mdclab/sweep.hpp"

using namespace mdc;

namespace {

sweep::Mode mode_of(const benchmark::State& state) {
    return state.range(0) ? sweep::Mode::Parallel : sweep::Mode::Serial;
}

void BM_CubeConsistency(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep::cube_consistency_sweep(1, 2000, mode_of(state)));
}

void BM_Factorization(benchmark::State& state) {
    const auto samples = sample_params(2, 200);
    for (auto _ : state) benchmark::DoNotOptimize(sweep::factorization_sweep(samples, mode_of(state)));
}

void BM_Paths(benchmark::State& state) {
    const DerivedParams d = derive({3, 2, 1});
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep::path_sweep(d, 3, 2, 2, 7, 50, mode_of(state)));
}

void BM_Deformations(benchmark::State& state) {
    const auto k = surface::canonical_coeffs(3, 2, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep::deformation_sweep(k, 3, 20, 8, mode_of(state)));
}

}  // namespace

BENCHMARK(BM_CubeConsistency)->Arg(0)->Arg(1);
BENCHMARK(BM_Factorization)->Arg(0)->Arg(1);
BENCHMARK(BM_Paths)->Arg(0)->Arg(1);
BENCHMARK(BM_Deformations)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
