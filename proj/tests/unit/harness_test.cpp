#include <gtest/gtest.h>

#include <sstream>

#include "decon/harness.hpp"

namespace decon {
namespace {

ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

ErrorCode parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << text;
  return ErrorCode::BadParams;
}

TEST(AgentFormula, Terms) {
  const GraphParameters p{10, 3, 4};
  EXPECT_EQ(resolve_agent_formula("7", p), 7u);
  EXPECT_EQ(resolve_agent_formula("n", p), 10u);
  EXPECT_EQ(resolve_agent_formula("d+k", p), 7u);
  EXPECT_EQ(resolve_agent_formula("d + 2k", p), 11u);
  EXPECT_EQ(resolve_agent_formula("n-2", p), 8u);
  EXPECT_EQ(resolve_agent_formula("2*n+1", p), 21u);
  EXPECT_EQ(resolve_agent_formula("d-5", p), 1u);
  for (const char* bad : {"", "q", "n+", "2**n", "d k"}) {
    EXPECT_THROW(resolve_agent_formula(bad, p), Error) << bad;
  }
}

TEST(Budget, PerStrategy) {
  const GraphParameters p{10, 3, 4};
  EXPECT_EQ(strategy_budget("uni", p), 10u);
  EXPECT_EQ(strategy_budget("modified", p), 7u);
  EXPECT_EQ(strategy_budget("infinite", p), 11u);
  EXPECT_EQ(strategy_budget("modified", GraphParameters{7, 4, 0}), 5u);
}

TEST(ScenarioConfig, ParsesAllSections) {
  const ScenarioConfig c = parse(R"(
[scenario]
name = demo
[graph]
family = random_connected
n = 12
k = 3
seed = 9
home = 2
[model]
kind = IDED
[adversary]
name = random
p = 0.25
seed = 4
[strategy]
name = infinite
strict_visibility = true
[run]
agents = d+2k
max_rounds = 500
stall_window = 40
seed = 3
shuffle_exchange = true
)");
  EXPECT_EQ(c.name, "demo");
  EXPECT_EQ(c.family, "random_connected");
  EXPECT_EQ(c.params.at("n"), 12);
  EXPECT_EQ(c.graph_seed, 9u);
  EXPECT_EQ(c.home, 2u);
  EXPECT_EQ(c.model, DynamicityModel::ided());
  EXPECT_EQ(c.adversary, "random");
  EXPECT_DOUBLE_EQ(c.removal_probability, 0.25);
  EXPECT_EQ(c.strategy, "infinite");
  EXPECT_TRUE(c.strict_visibility);
  EXPECT_EQ(c.agents, "d+2k");
  EXPECT_EQ(c.max_rounds, 500u);
  EXPECT_EQ(c.stall_window, Round{40});
  EXPECT_TRUE(c.shuffle_exchange);

  const ScenarioResult r = run_scenario(c);
  EXPECT_EQ(r.agents, r.params.d + 2 * r.params.k);
  EXPECT_EQ(r.metrics.scenario, "demo");
  EXPECT_EQ(r.run.trace.header.home, 2u);
}

TEST(ScenarioConfig, Errors) {
  EXPECT_EQ(parse_error("[model]\nkind = LATE\n"), ErrorCode::ConfigError);
  EXPECT_EQ(parse_error("[model]\nkind = FTEA\nT = zero\n"), ErrorCode::ConfigError);
  EXPECT_EQ(parse_error("[graph\n"), ErrorCode::ConfigError);
  EXPECT_THROW(run_scenario(parse("[strategy]\nname = nope\n")), Error);
}

TEST(ScenarioConfig, BudgetEnforcementIsOptIn) {
  ScenarioConfig c = parse("[graph]\nfamily = cycle\nn = 6\n[strategy]\nname = modified\n[run]\nagents = 2\n");
  EXPECT_EQ(run_scenario(c).run.outcome.kind, OutcomeKind::FullSuccess);
  c.enforce_budget = true;
  try {
    run_scenario(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientAgents);
  }
}

TEST(ScenarioConfig, InfiniteReturnsToALoneGuard) {
  // A guard that walked on alone leaves a clean port the team never linked;
  // the team has to come back for it once its own work runs out.
  const ScenarioConfig c = parse(R"(
[graph]
family = random_connected
n = 20
k = 2
[model]
kind = FTEA
T = 1
[adversary]
name = random
p = 0.3
[strategy]
name = infinite
[run]
agents = d+2k
seed = 3
max_rounds = 2000
)");
  EXPECT_EQ(run_scenario(c).run.outcome.kind, OutcomeKind::FullSuccess);
}

TEST(ScenarioConfig, BuildsNamedAdversaries) {
  ScenarioConfig c = parse("[graph]\nfamily = wheel\nn = 6\n[adversary]\nname = wheel_rim\n");
  const Footprint fp = build_footprint(c);
  EXPECT_EQ(build_adversary(c, fp)->name(), "wheel_rim");
  c.adversary = "hide_edge";
  c.hidden_edge = 3;
  EXPECT_EQ(build_adversary(c, fp)->name(), "hide_edge");
  c.adversary = "teleport";
  EXPECT_THROW(build_adversary(c, fp), Error);
}

TEST(Metrics, TsvColumnsLineUp) {
  MetricsRow row;
  row.scenario = "x";
  row.outcome = OutcomeKind::Stall;
  const auto columns = [](const std::string& line) { return std::count(line.begin(), line.end(), '\t'); };
  EXPECT_EQ(columns(metrics_tsv_header()), columns(to_tsv(row)));
  EXPECT_NE(to_tsv(row).find("Stall"), std::string::npos);
}

TEST(Experiment, ParseExpandRun) {
  std::istringstream in(R"(
[experiment]
corpus = random_connected
n = 6, 7
k = 0, 2
models = FTEA:2, IDED
budgets = n, d+k
seeds = 2
max_rounds = 5000
threads = 2
)");
  const ExperimentConfig c = parse_experiment(in);
  EXPECT_EQ(c.sizes, (std::vector<std::size_t>{6, 7}));
  ASSERT_EQ(c.models.size(), 2u);
  EXPECT_EQ(c.models[0], DynamicityModel::ftea(2));
  const auto cells = expand_experiment(c);
  EXPECT_EQ(cells.size(), 2u * 2 * 2 * 2 * 2);
  const ExperimentResult result = run_experiment(c);
  EXPECT_EQ(result.rows.size(), cells.size());
  std::ostringstream summary;
  write_summary(summary, result);
  EXPECT_NE(summary.str().find("FTEA"), std::string::npos);
}

}  // namespace
}  // namespace decon
