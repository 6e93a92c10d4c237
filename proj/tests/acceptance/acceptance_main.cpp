// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "decon/engine.hpp"
#include "decon/generators.hpp"
#include "decon/harness.hpp"
#include "support/oracles.hpp"

namespace {

using namespace decon;

struct Verdict {
  bool pass = true;
  std::string detail;
};

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Collects the first few failure messages from worker threads.
class Failures {
 public:
  void add(std::string message) {
    std::lock_guard lock(mutex_);
    if (count_++ < 3) first_ += (first_.empty() ? "" : "; ") + message;
  }
  std::size_t count() const { return count_; }
  std::string summary() const { return first_; }

 private:
  std::mutex mutex_;
  std::size_t count_ = 0;
  std::string first_;
};

/// Independent soundness check shared by the run-based criteria.
struct SoundnessTally {
  std::atomic<std::size_t> traces{0};
  std::atomic<std::size_t> rounds{0};
  Failures failures;

  void check(const RunResult& result, const std::string& label) {
    const VerifyReport report = verify_trace(result.trace);
    ++traces;
    rounds += report.rounds_checked;
    if (!report.ok) failures.add(label + ": " + report.message);
    if (result.outcome.kind == OutcomeKind::MonotonicityViolation) return;
    for (const RoundRecord& r : result.trace.rounds) {
      if (!r.violated_nodes.empty() || !r.violated_edges.empty()) {
        failures.add(label + ": flip recorded in round " + std::to_string(r.round));
        break;
      }
    }
  }
};

SoundnessTally soundness;

RunResult run_with(const Footprint& fp, const DynamicityModel& model, Adversary& adversary, const Strategy& strategy,
                   std::size_t agents, NodeId home = 0, RunOptions options = {}) {
  RunSpec spec;
  spec.footprint = &fp;
  spec.model = model;
  spec.adversary = &adversary;
  spec.strategy = &strategy;
  spec.agent_count = agents;
  spec.home = home;
  spec.options = options;
  return run(spec);
}

struct CorpusGraph {
  Footprint fp;
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
};

/// 120 seeded random connected footprints, n in 4..20, k in 0..n where the
/// graph has room.
std::vector<CorpusGraph> random_corpus() {
  std::vector<CorpusGraph> corpus;
  for (std::uint64_t i = 0; i < 120; ++i) {
    std::mt19937_64 rng(i);
    const std::size_t n = 4 + i % 17;
    const std::size_t room = n * (n - 1) / 2 - (n - 1);
    const std::size_t k = std::min<std::size_t>(rng() % (n + 1), room);
    corpus.push_back({random_connected_graph(n, k, 1000 + i), n, k, 1000 + i});
  }
  return corpus;
}

Verdict criterion1() {
  const auto catalog = testing::connected_graph_catalog(8);
  const std::vector<std::size_t> expected{0, 1, 1, 2, 6, 21, 112, 853, 11117};
  for (std::size_t n = 1; n <= 8; ++n) {
    if (catalog[n].size() != expected[n]) {
      return {false, "catalog has " + std::to_string(catalog[n].size()) + " graphs on " + std::to_string(n) +
                         " nodes, expected " + std::to_string(expected[n])};
    }
  }
  std::vector<const testing::Rows*> all;
  for (const auto& level : catalog) {
    for (const auto& g : level) all.push_back(&g);
  }
  Failures failures;
  std::atomic<std::size_t> samples{0};
  parallel_for(all.size(), [&](std::size_t i) {
    const Footprint fp = testing::to_footprint(*all[i]);
    std::mt19937_64 rng(i);
    for (int s = 0; s < 200; ++s) {
      const ContaminationState state = testing::random_state(fp, rng);
      NodeMask guarded(fp.node_count());
      for (std::size_t v = 0; v < guarded.size(); ++v) guarded[v] = rng() % 3 == 0;
      EdgeMask present(fp.edge_count(), true);
      if (s % 2) {
        for (std::size_t e = 0; e < present.size(); ++e) present[e] = rng() % 4 != 0;
      }
      const auto [got, report] = spread(fp, state, present, guarded);
      if (got != testing::brute_force_spread(fp, state, present, guarded)) {
        failures.add("graph " + std::to_string(i) + " sample " + std::to_string(s));
      }
      ++samples;
    }
  });
  std::string detail = std::to_string(all.size()) + " graphs, " + std::to_string(samples.load()) + " samples";
  if (failures.count()) return {false, detail + ", " + std::to_string(failures.count()) + " mismatches: " + failures.summary()};
  return {true, detail};
}

struct CorpusRun {
  std::size_t graph = 0;
  std::size_t T = 0;
  bool dynamic = true;
};

Verdict corpus_sufficiency(const std::vector<CorpusGraph>& corpus, const std::string& strategy_name, bool with_static,
                           bool restrict_k, const std::function<std::size_t(const CorpusGraph&)>& agents,
                           const std::function<Round(const CorpusGraph&, std::size_t T)>& bound) {
  std::vector<CorpusRun> runs;
  for (std::size_t g = 0; g < corpus.size(); ++g) {
    if (restrict_k && corpus[g].k >= corpus[g].n) continue;
    if (with_static) runs.push_back({g, 1, false});
    for (std::size_t T = 1; T <= 3; ++T) runs.push_back({g, T, true});
  }
  const auto strategy = make_strategy(strategy_name);
  Failures failures;
  std::atomic<Round> worst_ratio_permille{0};
  std::set<std::size_t> graphs;
  for (const CorpusRun& r : runs) graphs.insert(r.graph);
  parallel_for(runs.size(), [&](std::size_t i) {
    const CorpusRun& r = runs[i];
    const CorpusGraph& g = corpus[r.graph];
    const DynamicityModel model = DynamicityModel::ftea(r.T);
    std::unique_ptr<Adversary> adversary = r.dynamic ? random_ftea_adversary(g.seed * 10 + r.T, r.T, 0.3)
                                                     : std::make_unique<StaticAdversary>();
    const Round limit = bound(g, r.T);
    RunOptions options;
    options.max_rounds = limit + 1;
    options.seed = g.seed;
    const RunResult result = run_with(g.fp, model, *adversary, *strategy, agents(g), 0, options);
    const std::string label = "n=" + std::to_string(g.n) + " k=" + std::to_string(g.k) + " " + adversary->name() +
                              " T=" + std::to_string(r.T);
    soundness.check(result, strategy_name + " " + label);
    if (result.outcome.kind != OutcomeKind::FullSuccess || result.outcome.round > limit) {
      failures.add(label + " -> " + std::string(to_string(result.outcome.kind)) + " at " +
                   std::to_string(result.outcome.round));
      return;
    }
    const Round ratio = result.outcome.round * 1000 / limit;
    for (Round seen = worst_ratio_permille.load(); ratio > seen && !worst_ratio_permille.compare_exchange_weak(seen, ratio);) {
    }
  });
  std::string detail = std::to_string(runs.size()) + " runs on " + std::to_string(graphs.size()) +
                       " footprints, slowest used " + std::to_string(worst_ratio_permille.load() / 10.0).substr(0, 4) +
                       "% of the round bound";
  if (failures.count()) return {false, detail + ", " + std::to_string(failures.count()) + " failed: " + failures.summary()};
  return {true, detail};
}

Verdict criterion4() {
  const Footprint fp = figure4_graph(3, 3);
  const auto strategy = make_strategy("modified");
  std::string detail;
  bool pass = true;
  for (auto [agents, want] : {std::pair{6u, OutcomeKind::FullSuccess}, std::pair{5u, OutcomeKind::Stall}}) {
    StaticAdversary adversary;
    const RunResult result = run_with(fp, DynamicityModel::ftea(1), adversary, *strategy, agents);
    pass = pass && result.outcome.kind == want && exit_code(result.outcome.kind) == exit_code(want);
    detail += (detail.empty() ? "" : ", ") + std::to_string(agents) + " agents -> " +
              std::string(to_string(result.outcome.kind)) + " (exit " + std::to_string(exit_code(result.outcome.kind)) +
              ")";
  }
  return {pass, detail};
}

bool is_blocked(OutcomeKind kind) { return kind == OutcomeKind::Stall || kind == OutcomeKind::MonotonicityViolation; }

Verdict criterion5() {
  Failures failures;
  std::size_t runs = 0;
  Round slowest = 0;
  for (std::size_t n = 5; n <= 12; ++n) {
    for (const char* name : {"uni", "modified", "infinite"}) {
      ScenarioSetup setup = wheel_scenario(n);
      const auto strategy = make_strategy(name);
      const RunResult result = run_with(setup.footprint, setup.model, *setup.adversary, *strategy, n - 1, setup.home);
      soundness.check(result, std::string("wheel ") + name);
      ++runs;
      if (!is_blocked(result.outcome.kind)) {
        failures.add(std::string(name) + " n=" + std::to_string(n) + " -> " + std::string(to_string(result.outcome.kind)));
      }
    }
    ScenarioSetup setup = wheel_scenario(n);
    const auto params = graph_parameters(setup.footprint);
    const auto infinite = make_strategy("infinite");
    const RunResult result =
        run_with(setup.footprint, setup.model, *setup.adversary, *infinite, params.d + 2 * params.k, setup.home);
    soundness.check(result, "wheel infinite d+2k");
    ++runs;
    const Round limit = 64 * n * n;
    if (!result.all_nodes_clean_at || *result.all_nodes_clean_at > limit) {
      failures.add("infinite d+2k n=" + std::to_string(n) + " -> " + std::string(to_string(result.outcome.kind)));
    } else {
      slowest = std::max(slowest, *result.all_nodes_clean_at);
    }
  }
  std::string detail = std::to_string(runs) + " runs, d+2k runs clean by round " + std::to_string(slowest);
  if (failures.count()) return {false, detail + ", " + std::to_string(failures.count()) + " failed: " + failures.summary()};
  return {true, detail};
}

Verdict lower_bound_family(const std::vector<std::size_t>& sizes, const std::vector<std::string>& strategies,
                           const std::function<ScenarioSetup(std::size_t)>& make, const std::string& family,
                           const std::function<std::size_t(const GraphParameters&)>& budget, bool stall_only) {
  Failures failures;
  std::string outcomes;
  for (std::size_t size : sizes) {
    for (const std::string& name : strategies) {
      ScenarioSetup setup = make(size);
      const auto params = graph_parameters(setup.footprint);
      const std::size_t agents = budget(params);
      const auto strategy = make_strategy(name);
      const RunResult result = run_with(setup.footprint, setup.model, *setup.adversary, *strategy, agents, setup.home);
      soundness.check(result, family + " " + name);
      const bool ok = stall_only ? result.outcome.kind == OutcomeKind::Stall : is_blocked(result.outcome.kind);
      const std::string line = name + "@" + std::to_string(size) + "/" + std::to_string(agents) + "=" +
                               std::string(to_string(result.outcome.kind));
      outcomes += (outcomes.empty() ? "" : " ") + line;
      if (!ok) failures.add(line);
    }
  }
  return {failures.count() == 0, outcomes};
}

/// Agents that never move; lets the adversary run for as long as we like.
class IdleStrategy final : public Strategy {
 public:
  std::string name() const override { return "idle"; }
  bool requires_node_oracle() const override { return false; }
  void observe(const LocalView&, Memory&) const override {}
  Action step(const LocalView&, Memory&) const override { return Action::stay(); }
};

Verdict criterion8() {
  constexpr Round kRounds = 10'000;
  Failures failures;
  std::atomic<std::size_t> traces{0};
  const IdleStrategy idle;
  parallel_for(50 * 7, [&](std::size_t job) {
    const std::uint64_t seed = job / 7;
    const std::size_t kind = job % 7;
    Footprint fp = random_connected_graph(6 + seed % 9, 1 + seed % 5, seed);
    DynamicityModel model = DynamicityModel::ided();
    std::unique_ptr<Adversary> adversary;
    NodeId home = 0;
    switch (kind) {
      case 0:
      case 1:
      case 2:
        model = DynamicityModel::ftea(kind + 1);
        adversary = random_ftea_adversary(seed, kind + 1, 0.5);
        break;
      case 3:
        adversary = random_ided_adversary(seed, 0.5);
        break;
      case 4:
        model = DynamicityModel::ftea(1);
        adversary = std::make_unique<StaticAdversary>();
        break;
      case 5:
        fp = cycle_graph(5 + seed % 6);
        adversary = std::make_unique<HideEdgeAdversary>(static_cast<EdgeId>(seed % fp.edge_count()));
        break;
      default: {
        ScenarioSetup setup = wheel_scenario(5 + seed % 8);
        fp = setup.footprint;
        model = setup.model;
        adversary = std::move(setup.adversary);
        home = setup.home;
      }
    }
    RunOptions options;
    options.max_rounds = kRounds;
    options.stall_window = 0;
    const RunResult result = run_with(fp, model, *adversary, idle, 2, home, options);
    const VerifyReport report = verify_trace(result.trace);
    ++traces;
    if (!report.ok || result.outcome.kind != OutcomeKind::RoundLimit || report.rounds_checked < kRounds) {
      failures.add(adversary->name() + " seed " + std::to_string(seed) + ": " +
                   (report.ok ? std::string(to_string(result.outcome.kind)) : report.message));
    }
  });
  std::string detail = std::to_string(traces.load()) + " traces of " + std::to_string(kRounds) + " rounds";
  if (failures.count()) return {false, detail + ", " + std::to_string(failures.count()) + " failed: " + failures.summary()};
  return {true, detail};
}

Verdict criterion9() {
  std::string detail = std::to_string(soundness.traces.load()) + " traces, " + std::to_string(soundness.rounds.load()) +
                       " rounds re-checked";
  if (soundness.failures.count()) {
    return {false, detail + ", " + std::to_string(soundness.failures.count()) + " bad: " + soundness.failures.summary()};
  }
  return {soundness.traces > 0, detail};
}

std::string file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Verdict criterion10(const std::vector<CorpusGraph>& corpus) {
  std::vector<std::function<Trace()>> scenarios;
  for (const char* file : {"figure4", "wheel9_ided", "bipartite8", "random_ftea", "tree_depth3", "hidden_edge"}) {
    const auto path = std::filesystem::path(DECON_SCENARIO_DIR) / (std::string(file) + ".cfg");
    scenarios.push_back([path] { return run_scenario(load_scenario(path)).run.trace; });
  }
  for (std::size_t i = 0; scenarios.size() < 20; ++i) {
    const CorpusGraph& g = corpus[i * 7 % corpus.size()];
    const char* name = i % 3 == 0 ? "uni" : i % 3 == 1 ? "modified" : "infinite";
    scenarios.push_back([&g, name, i] {
      const auto strategy = make_strategy(name);
      const std::size_t T = 1 + i % 3;
      auto adversary = i % 2 ? random_ftea_adversary(g.seed + i, T, 0.3) : random_ided_adversary(g.seed + i, 0.3);
      const DynamicityModel model = i % 2 ? DynamicityModel::ftea(T) : DynamicityModel::ided();
      RunOptions options;
      options.max_rounds = 20'000;
      options.seed = g.seed + i;
      options.shuffle_exchange = i % 4 == 0;
      options.shuffle_seed = g.seed;
      const auto params = graph_parameters(g.fp);
      return run_with(g.fp, model, *adversary, *strategy, params.d + 2 * params.k, 0, options).trace;
    });
  }
  const auto dir = std::filesystem::temp_directory_path() / ("decon-determinism-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  Failures failures;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    std::string bytes[2];
    for (int pass = 0; pass < 2; ++pass) {
      const auto path = dir / (std::to_string(i) + "." + std::to_string(pass) + ".jsonl");
      {
        std::ofstream out(path, std::ios::binary);
        write_trace(out, scenarios[i]());
      }
      bytes[pass] = file_bytes(path);
    }
    if (bytes[0] != bytes[1] || bytes[0].empty()) failures.add("scenario " + std::to_string(i));
  }
  std::filesystem::remove_all(dir);
  std::string detail = std::to_string(scenarios.size()) + " scenarios written twice";
  if (failures.count()) return {false, detail + ", differing: " + failures.summary()};
  return {true, detail};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const std::string& title, const Verdict& v) {
    std::cout << (v.pass ? "PASS" : "FAIL") << " C" << id << " " << title << ": " << v.detail << std::endl;
    if (!v.pass) ++failed;
  };
  const auto corpus = random_corpus();

  report(1, "spread equals brute-force closure", criterion1());
  report(2, "uni with n agents, static and FTEA T=1..3, within 64n^2T",
         corpus_sufficiency(corpus, "uni", true, false, [](const CorpusGraph& g) { return g.n; },
                            [](const CorpusGraph& g, std::size_t T) { return Round{64} * g.n * g.n * T; }));
  report(3, "modified with d+k agents, k<n, FTEA T=1..3, within 64T(n+|E|)",
         corpus_sufficiency(
             corpus, "modified", false, true,
             [](const CorpusGraph& g) {
               const auto p = graph_parameters(g.fp);
               return p.d + p.k;
             },
             [](const CorpusGraph& g, std::size_t T) { return Round{64} * T * (g.n + g.fp.edge_count()); }));
  report(4, "figure4(3,3) modified: 6 agents succeed, 5 stall", criterion4());
  report(5, "wheel n=5..12 IDED: n-1 agents blocked, infinite d+2k cleans nodes within 64n^2", criterion5());
  std::cout << "  scope: lower bounds below are checked against the implemented strategies, not all deterministic "
               "algorithms"
            << std::endl;
  report(6, "K_{n/2,n/2} n=6,8,10 with n-2 agents blocked",
         lower_bound_family({6, 8, 10}, {"uni", "modified", "infinite"}, bipartite_scenario, "bipartite",
                            [](const GraphParameters& p) { return p.n - 2; }, false));
  report(7, "complete binary tree depth 2..4 with d-1 agents stalls",
         lower_bound_family({2, 3, 4}, {"modified", "infinite"}, diameter_tree_scenario, "tree",
                            [](const GraphParameters& p) { return p.d - 1; }, true));
  report(8, "built-in adversaries stay legal over 10^4 rounds x 50 seeds", criterion8());
  report(9, "independent re-check of every run above", criterion9());
  report(10, "same seed gives byte-identical trace files", criterion10(corpus));
  return failed ? 1 : 0;
}
