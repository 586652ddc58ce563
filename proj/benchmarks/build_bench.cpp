#include <benchmark/benchmark.h>

#include "dforest/builders.hpp"
#include "dforest/testkit.hpp"

using namespace dforest;

namespace {

DirectedGraph bench_graph(std::size_t n) {
    return testkit::random_digraph(testkit::GraphKind::power_law, n, 6, 11);
}

void BM_BuildTopDown(benchmark::State& state) {
    DirectedGraph g = bench_graph(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_topdown(g));
    state.SetItemsProcessed(static_cast<std::int64_t>(g.edge_count()) * state.iterations());
}

void BM_BuildBottomUp(benchmark::State& state) {
    DirectedGraph g = bench_graph(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_bottomup(g));
    state.SetItemsProcessed(static_cast<std::int64_t>(g.edge_count()) * state.iterations());
}

void BM_DecomposeAllK(benchmark::State& state) {
    DirectedGraph g = bench_graph(static_cast<std::size_t>(state.range(0)));
    int kmax = max_k(g);
    for (auto _ : state)
        for (int k = 0; k <= kmax; ++k) benchmark::DoNotOptimize(decompose_for_k(g, k));
}

}  // namespace

BENCHMARK(BM_BuildTopDown)->Arg(1000)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildBottomUp)->Arg(1000)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecomposeAllK)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);
