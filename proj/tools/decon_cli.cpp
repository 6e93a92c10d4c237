#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "decon/harness.hpp"
#include "decon/trace.hpp"

namespace fs = std::filesystem;

namespace {

fs::path default_out_dir() {
  const char* env = std::getenv("DECON_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path();
}

int generate_cmd(const std::string& family, const decon::GeneratorParams& params, std::uint64_t seed,
                 const std::string& out) {
  const decon::Footprint fp = decon::generate(family, params, seed);
  if (out.empty()) {
    decon::write_footprint(std::cout, fp);
    return 0;
  }
  std::ofstream file(out);
  if (!file) throw decon::Error(decon::ErrorCode::ConfigError, "cannot write " + out);
  decon::write_footprint(file, fp);
  return 0;
}

int run_cmd(decon::ScenarioConfig config, std::string out) {
  const decon::ScenarioResult result = decon::run_scenario(config);
  if (out.empty() && !default_out_dir().empty()) {
    fs::create_directories(default_out_dir());
    out = (default_out_dir() / (config.name + ".trace.jsonl")).string();
  }
  if (!out.empty()) {
    std::ofstream file(out);
    if (!file) throw decon::Error(decon::ErrorCode::ConfigError, "cannot write " + out);
    decon::write_trace(file, result.run.trace);
  }
  std::cerr << "resolved agents: " << result.agents << " (n=" << result.params.n << " d=" << result.params.d
            << " k=" << result.params.k << ")\n";
  std::cout << decon::metrics_tsv_header() << '\n' << decon::to_tsv(result.metrics) << '\n';
  std::cout << "outcome: " << decon::to_string(result.run.outcome.kind) << " at round " << result.run.outcome.round;
  if (!result.run.outcome.detail.empty()) std::cout << " (" << result.run.outcome.detail << ')';
  std::cout << '\n';
  return decon::exit_code(result.run.outcome.kind);
}

int verify_cmd(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw decon::Error(decon::ErrorCode::CorruptTrace, "cannot open " + file);
  const decon::Trace trace = decon::read_trace(in);
  const decon::VerifyReport report = decon::verify_trace(trace);
  if (report.ok) {
    std::cout << "ok: " << report.rounds_checked << " rounds, outcome "
              << decon::to_string(trace.outcome->kind) << '\n';
    return 0;
  }
  std::cout << "FAILED";
  if (report.round) std::cout << " at round " << *report.round;
  std::cout << ": " << report.message << '\n';
  return 1;
}

int experiment_cmd(const std::string& config_file, std::optional<unsigned> threads, std::string out) {
  std::ifstream in(config_file);
  if (!in) throw decon::Error(decon::ErrorCode::ConfigError, "cannot open " + config_file);
  decon::ExperimentConfig config = decon::parse_experiment(in);
  if (threads) config.threads = *threads;
  const decon::ExperimentResult result = decon::run_experiment(config);
  if (out.empty()) out = default_out_dir().string();
  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream tsv(fs::path(out) / "metrics.tsv");
    tsv << decon::metrics_tsv_header() << "\terror\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      tsv << decon::to_tsv(result.rows[i]) << '\t' << result.errors[i] << '\n';
    }
    std::cerr << "wrote " << (fs::path(out) / "metrics.tsv").string() << '\n';
  }
  decon::write_summary(std::cout, result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone decontamination of dynamic graphs"};
  app.require_subcommand(1);

  std::string family;
  std::optional<std::int64_t> gen_n, gen_depth, gen_d, gen_k;
  std::uint64_t seed = 0;
  std::string out;
  auto* generate = app.add_subcommand("generate", "Write a footprint from a generator family");
  generate->add_option("family", family, "path, cycle, tree, wheel, complete_bipartite, figure4, random_connected")
      ->required();
  generate->add_option("--n", gen_n, "Node count");
  generate->add_option("--depth", gen_depth, "Tree depth");
  generate->add_option("--d", gen_d, "figure4 diameter");
  generate->add_option("--k", gen_k, "Cyclomatic number / extra edges");
  generate->add_option("--seed", seed, "Generator seed");
  generate->add_option("--out", out, "Output file (default stdout)");

  std::string scenario_file;
  std::optional<std::uint64_t> run_seed;
  std::optional<decon::Round> max_rounds, stall_window;
  std::optional<std::string> agents, strategy;
  auto* run = app.add_subcommand("run", "Run one scenario; the exit status encodes the outcome");
  run->add_option("--scenario", scenario_file, "Scenario INI file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", run_seed, "Run seed (adversary and random graphs)");
  run->add_option("--max-rounds", max_rounds, "Round limit");
  run->add_option("--stall-window", stall_window, "Quiet rounds before a stall is declared; 0 disables");
  run->add_option("--agents", agents, "Agent count or formula over n, d, k");
  run->add_option("--strategy", strategy, "uni, modified or infinite");
  run->add_option("--out", out, "Trace file (default $DECON_OUT_DIR/<name>.trace.jsonl if set)");

  std::string trace_file;
  auto* verify = app.add_subcommand("verify-trace", "Independently re-check a trace file");
  verify->add_option("trace", trace_file, "Trace file")->required()->check(CLI::ExistingFile);

  std::string experiment_file;
  std::optional<unsigned> threads;
  auto* experiment = app.add_subcommand("experiment", "Run a matrix of scenarios and summarise");
  experiment->add_option("--config", experiment_file, "Experiment INI file")->required()->check(CLI::ExistingFile);
  experiment->add_option("--threads", threads, "Worker threads (default: hardware)");
  experiment->add_option("--out", out, "Directory for metrics.tsv (default $DECON_OUT_DIR)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      decon::GeneratorParams params;
      if (gen_n) params["n"] = *gen_n;
      if (gen_depth) params["depth"] = *gen_depth;
      if (gen_d) params["d"] = *gen_d;
      if (gen_k) params["k"] = *gen_k;
      return generate_cmd(family, params, seed, out);
    }
    if (*run) {
      decon::ScenarioConfig config = decon::load_scenario(scenario_file);
      if (run_seed) config.seed = *run_seed;
      if (max_rounds) config.max_rounds = *max_rounds;
      if (stall_window) config.stall_window = *stall_window;
      if (agents) config.agents = *agents;
      if (strategy) config.strategy = *strategy;
      return run_cmd(config, out);
    }
    if (*verify) return verify_cmd(trace_file);
    if (*experiment) return experiment_cmd(experiment_file, threads, out);
  } catch (const decon::Error& e) {
    std::cerr << "error (" << decon::to_string(e.code()) << "): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
