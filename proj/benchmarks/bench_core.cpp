#include <benchmark/benchmark.h>

#include <random>

#include "decon/engine.hpp"
#include "decon/generators.hpp"
#include "decon/trace.hpp"

namespace {

using namespace decon;

void BM_Spread(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Footprint fp = random_connected_graph(n, n, 1);
  std::mt19937_64 rng(2);
  ContaminationState start = ContaminationState::initial(fp);
  for (std::size_t v = 0; v < n; ++v) start.node_contaminated[v] = rng() % 4 == 0;
  for (std::size_t e = 0; e < fp.edge_count(); ++e) start.edge_contaminated[e] = rng() % 4 == 0;
  const EdgeMask present(fp.edge_count(), true);
  const NodeMask guarded(n, false);
  for (auto _ : state) benchmark::DoNotOptimize(spread(fp, start, present, guarded));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_Spread)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_FullRun(benchmark::State& state, const char* name) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Footprint fp = random_connected_graph(n, n / 4, 3);
  const auto strategy = make_strategy(name);
  std::size_t rounds = 0;
  for (auto _ : state) {
    auto adversary = random_ftea_adversary(5, 2, 0.3);
    RunSpec spec{&fp, DynamicityModel::ftea(2), adversary.get(), strategy.get(), n, 0, {}};
    const RunResult result = run(spec);
    rounds = result.trace.rounds.size();
    benchmark::DoNotOptimize(result.outcome);
  }
  state.counters["rounds"] = static_cast<double>(rounds);
}
BENCHMARK_CAPTURE(BM_FullRun, uni, "uni")->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FullRun, modified, "modified")->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FullRun, infinite, "infinite")->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_VerifyTrace(benchmark::State& state) {
  const Footprint fp = random_connected_graph(20, 5, 7);
  auto adversary = random_ftea_adversary(7, 2, 0.3);
  const auto strategy = make_strategy("uni");
  RunSpec spec{&fp, DynamicityModel::ftea(2), adversary.get(), strategy.get(), 20, 0, {}};
  const Trace trace = run(spec).trace;
  for (auto _ : state) benchmark::DoNotOptimize(verify_trace(trace));
  state.counters["rounds"] = static_cast<double>(trace.rounds.size());
}
BENCHMARK(BM_VerifyTrace)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
