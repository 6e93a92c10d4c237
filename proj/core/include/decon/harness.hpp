#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "decon/dynamics.hpp"
#include "decon/engine.hpp"
#include "decon/generators.hpp"

namespace decon {

/// n, d and k of a footprint.
struct GraphParameters {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 0;
};

GraphParameters graph_parameters(const Footprint& fp);

/// Agent count from an integer or a sum of terms over n, d, k such as
/// "d+2k", "n-2" or "2*n+1". Results below 1 are clamped to 1.
/// Throws Error{ConfigError}.
std::size_t resolve_agent_formula(const std::string& formula, const GraphParameters& params);

/// Agents each strategy is guaranteed to need: n for uni, d+k for modified
/// (d+1 on trees), d+2k for infinite.
std::size_t strategy_budget(const std::string& strategy, const GraphParameters& params);

struct ScenarioConfig {
  std::string name = "scenario";
  // [graph]
  std::string family = "path";
  GeneratorParams params;
  std::string footprint_file;
  std::optional<std::uint64_t> graph_seed;
  NodeId home = 0;
  // [model]
  DynamicityModel model;
  // [adversary]
  std::string adversary = "static";
  double removal_probability = 0.3;
  std::optional<std::uint64_t> adversary_seed;
  std::optional<EdgeId> hidden_edge;
  std::string schedule_file;
  // [strategy]
  std::string strategy = "uni";
  bool strict_visibility = false;
  std::optional<bool> node_oracle;
  // [run]
  std::string agents = "n";
  bool enforce_budget = false;
  Round max_rounds = 1'000'000;
  std::optional<Round> stall_window;
  std::uint64_t seed = 0;
  bool shuffle_exchange = false;
};

/// INI text with sections [graph] [model] [adversary] [strategy] [run].
/// Relative file names resolve against `base_dir`. Throws Error{ConfigError}.
ScenarioConfig parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& file);

Footprint build_footprint(const ScenarioConfig& config);
std::unique_ptr<Adversary> build_adversary(const ScenarioConfig& config, const Footprint& fp);

struct MetricsRow {
  std::string scenario;
  OutcomeKind outcome = OutcomeKind::RoundLimit;
  Round rounds = 0;
  std::size_t agents = 0;
  std::size_t violations = 0;
  std::size_t nodes_clean = 0;
  std::size_t edges_clean = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 0;
};

std::string metrics_tsv_header();
std::string to_tsv(const MetricsRow& row);

struct ScenarioResult {
  GraphParameters params;
  std::size_t agents = 0;
  RunResult run;
  MetricsRow metrics;
};

/// Builds everything the config describes and runs it. Throws
/// Error{InsufficientAgents} when enforce_budget is set and the resolved
/// count is below the strategy's budget.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Matrix of runs: every corpus graph under every model, budget and seed.
struct ExperimentConfig {
  /// random_connected or wheel.
  std::string corpus = "random_connected";
  std::vector<std::size_t> sizes{8, 10};
  /// Extra edges for random_connected; ignored for wheels.
  std::vector<std::size_t> extra_edges{0, 2, 10};
  std::vector<DynamicityModel> models{DynamicityModel::ftea(2), DynamicityModel::ided()};
  std::vector<std::string> budgets{"n", "d+k", "d+2k"};
  /// "auto" maps n to uni, d+k to modified, d+2k to infinite and anything
  /// else to the model's own algorithm.
  std::string strategy = "auto";
  std::size_t seeds = 5;
  double removal_probability = 0.3;
  Round max_rounds = 200'000;
  unsigned threads = 0;
};

ExperimentConfig parse_experiment(std::istream& in);

struct ExperimentCell {
  ScenarioConfig scenario;
  std::string budget;
  std::string regime;
};

struct ExperimentResult {
  std::vector<ExperimentCell> cells;
  std::vector<MetricsRow> rows;
  /// Set for cells that threw instead of producing an outcome.
  std::vector<std::string> errors;
};

std::vector<ExperimentCell> expand_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Success rates grouped by model, k<n versus k>=n, and budget.
void write_summary(std::ostream& out, const ExperimentResult& result);

}  // namespace decon
