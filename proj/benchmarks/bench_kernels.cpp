#include <benchmark/benchmark.h>

#include "svfa/analysis.hpp"
#include "svfa/io.hpp"
#include "svfa/kernels.hpp"

using namespace svfa;

namespace {
constexpr NormChoice E = NormChoice::euclidean;
}

static void BM_BasisRow(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bernstein_basis_row(n, 0.37));
}
BENCHMARK(BM_BasisRow)->Arg(64)->Arg(1024)->Arg(4096);

static void BM_BdCdf(benchmark::State& state) {
    Kernel K = bernstein_durrmeyer_kernel(static_cast<int>(state.range(0)));
    auto G = K.cdf_at(0.4);
    for (auto _ : state) benchmark::DoNotOptimize(G(0.61));
}
BENCHMARK(BM_BdCdf)->Arg(64)->Arg(1024)->Arg(4096);

static void BM_KantorovichCdf(benchmark::State& state) {
    Kernel K = kantorovich_kernel(static_cast<int>(state.range(0)));
    auto G = K.cdf_at(0.4);
    for (auto _ : state) benchmark::DoNotOptimize(G(0.61));
}
BENCHMARK(BM_KantorovichCdf)->Arg(64)->Arg(4096);

static void BM_ApplySelection(benchmark::State& state) {
    SetValuedFunction F = catalog_svf("jump-pair");
    Partition chi = Partition::uniform(0, 1, 256);
    std::vector<Selection> family = selection_family(F, chi, 2, E);
    Kernel K = bernstein_durrmeyer_kernel(static_cast<int>(state.range(0)));
    QuadratureRule rule;
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_selection(K, family[0], 0.5, rule));
}
BENCHMARK(BM_ApplySelection)->Arg(64)->Arg(1024)->Arg(4096);

static void BM_JumpExperimentRow(benchmark::State& state) {
    SetValuedFunction F = catalog_svf("jump-pair");
    Partition chi = Partition::uniform(0, 1, 128);
    std::vector<Selection> family = selection_family(F, chi, 2, E);
    Kernel K = kantorovich_kernel(static_cast<int>(state.range(0)));
    QuadratureRule rule;
    for (auto _ : state) benchmark::DoNotOptimize(apply_svf(K, family, 0.5, rule));
}
BENCHMARK(BM_JumpExperimentRow)->Arg(256)->Arg(4096);

BENCHMARK_MAIN();
