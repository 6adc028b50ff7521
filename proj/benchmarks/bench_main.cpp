#include <benchmark/benchmark.h>

#include "critwin/chain.hpp"
#include "critwin/continuum.hpp"
#include "critwin/graph.hpp"
#include "critwin/variates.hpp"
#include "critwin/window.hpp"

namespace {

using namespace critwin;

void BM_Binomial(benchmark::State& state) {
  auto rng = make_stream(1, 0, "bench-binomial");
  const auto trials = state.range(0);
  const double p = 5.0 / static_cast<double>(trials);
  for (auto _ : state) benchmark::DoNotOptimize(sample_binomial(rng, trials, p));
}
BENCHMARK(BM_Binomial)->Arg(10)->Arg(1000)->Arg(1000000);

void BM_SampleGraph(benchmark::State& state) {
  auto rng = make_stream(1, 0, "bench-graph");
  const auto n = state.range(0);
  const double p = edge_probability(AldousWindow{0.0}, n);
  for (auto _ : state) benchmark::DoNotOptimize(sample_graph(n, p, rng));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleGraph)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Explore(benchmark::State& state) {
  auto rng = make_stream(1, 0, "bench-explore");
  const auto n = state.range(0);
  const auto graph = sample_graph(n, edge_probability(AldousWindow{0.0}, n), rng);
  for (auto _ : state) benchmark::DoNotOptimize(explore(graph, 50, rng));
}
BENCHMARK(BM_Explore)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_SimulateTrace(benchmark::State& state) {
  auto rng = make_stream(1, 0, "bench-trace");
  const auto n = state.range(0);
  const CriticalWindow window = AldousWindow{0.0};
  const auto steps = default_max_steps(window, n);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_trace(n, 1000, window, steps, rng));
}
BENCHMARK(BM_SimulateTrace)->Arg(1000000)->Arg(1000000000)->Unit(benchmark::kMicrosecond);

void BM_SdeStep(benchmark::State& state) {
  auto rng = make_stream(1, 0, "bench-sde");
  for (auto _ : state) {
    SdeStepper s(1.0, 0.0, 1e-4);
    s.advance(10000, rng);
    benchmark::DoNotOptimize(s.c());
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_SdeStep)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
