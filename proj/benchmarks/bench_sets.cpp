#include <benchmark/benchmark.h>

#include <random>

#include "svfa/io.hpp"
#include "svfa/selections.hpp"
#include "svfa/sets.hpp"

using namespace svfa;

namespace {

constexpr NormChoice E = NormChoice::euclidean;

CompactSet random_set(std::mt19937& rng, int d, int m) {
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    std::vector<Point> pts;
    for (int i = 0; i < m; ++i) {
        std::vector<double> c(static_cast<std::size_t>(d));
        for (int q = 0; q < d; ++q) c[static_cast<std::size_t>(q)] = coord(rng);
        pts.emplace_back(std::move(c));
    }
    return CompactSet(std::move(pts));
}

}  // namespace

static void BM_Hausdorff(benchmark::State& state) {
    std::mt19937 rng(7);
    int m = static_cast<int>(state.range(0));
    CompactSet A = random_set(rng, 3, m);
    CompactSet B = random_set(rng, 3, m);
    for (auto _ : state) benchmark::DoNotOptimize(hausdorff(A, B, E));
}
BENCHMARK(BM_Hausdorff)->Arg(8)->Arg(32)->Arg(128);

static void BM_MetricChains(benchmark::State& state) {
    std::mt19937 rng(11);
    std::vector<CompactSet> sets;
    for (int i = 0; i < static_cast<int>(state.range(0)); ++i)
        sets.push_back(random_set(rng, 2, 4));
    for (auto _ : state) {
        auto chains = metric_chains(sets, 10000);
        benchmark::DoNotOptimize(chains.chains.size());
    }
}
BENCHMARK(BM_MetricChains)->Arg(4)->Arg(8);

static void BM_SelectionFamily(benchmark::State& state) {
    SetValuedFunction F = catalog_svf("lipschitz-tube", 5);
    Partition chi = Partition::uniform(0, 1, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto family = selection_family(F, chi, 5, E);
        benchmark::DoNotOptimize(family.size());
    }
}
BENCHMARK(BM_SelectionFamily)->Arg(128)->Arg(1024);

BENCHMARK_MAIN();
