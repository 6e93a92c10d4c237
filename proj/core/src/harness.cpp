#include "decon/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace decon {

GraphParameters graph_parameters(const Footprint& fp) {
  return {fp.node_count(), diameter(fp), cyclomatic_number(fp)};
}

std::size_t resolve_agent_formula(const std::string& formula, const GraphParameters& params) {
  std::string text;
  for (char c : formula) {
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  }
  if (text.empty()) throw Error(ErrorCode::ConfigError, "empty agent formula");
  auto bad = [&] { return Error(ErrorCode::ConfigError, "bad agent formula '" + formula + "'"); };
  long long total = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      throw bad();
    }
    long long coefficient = 1;
    bool have_number = false;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      coefficient = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        coefficient = coefficient * 10 + (text[i++] - '0');
        if (coefficient > 1'000'000'000) throw bad();
      }
      have_number = true;
      if (i < text.size() && text[i] == '*') ++i;
    }
    long long value = 1;
    if (i < text.size() && (text[i] == 'n' || text[i] == 'd' || text[i] == 'k')) {
      value = static_cast<long long>(text[i] == 'n' ? params.n : text[i] == 'd' ? params.d : params.k);
      ++i;
    } else if (!have_number || (i > 0 && text[i - 1] == '*')) {
      throw bad();
    }
    total += sign * coefficient * value;
  }
  return static_cast<std::size_t>(std::max<long long>(total, 1));
}

std::size_t strategy_budget(const std::string& strategy, const GraphParameters& p) {
  if (strategy == "uni") return p.n;
  if (strategy == "modified") return p.d + std::max<std::size_t>(p.k, 1);
  if (strategy == "infinite") return p.d + 2 * p.k;
  throw Error(ErrorCode::ConfigError, "unknown strategy '" + strategy + "'");
}

// ---- config ----

namespace {

namespace pt = boost::property_tree;

template <class T>
std::optional<T> get_opt(const pt::ptree& tree, const std::string& path) {
  auto child = tree.get_child_optional(path);
  if (!child) return std::nullopt;
  try {
    return child->get_value<T>();
  } catch (const pt::ptree_error&) {
    throw Error(ErrorCode::ConfigError, "bad value for " + path);
  }
}

bool parse_bool(const std::string& text, const std::string& key) {
  std::string s;
  for (char c : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw Error(ErrorCode::ConfigError, "bad boolean for " + key);
}

std::optional<bool> get_bool(const pt::ptree& tree, const std::string& path) {
  auto text = get_opt<std::string>(tree, path);
  if (!text) return std::nullopt;
  return parse_bool(*text, path);
}

DynamicityModel parse_model(const std::string& kind, std::size_t T) {
  if (kind == "FTEA" || kind == "ftea") return DynamicityModel::ftea(T);
  if (kind == "IDED" || kind == "ided") return DynamicityModel::ided();
  throw Error(ErrorCode::ConfigError, "unknown model '" + kind + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
  std::filesystem::path p(file);
  return p.is_absolute() || base.empty() ? p : base / p;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

std::size_t to_size(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const auto value = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(key);
    return static_cast<std::size_t>(value);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, "bad number '" + text + "' for " + key);
  }
}

}  // namespace

ScenarioConfig parse_scenario(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  ScenarioConfig c;
  for (const auto& [section, body] : tree) {
    if (section != "graph" && section != "model" && section != "adversary" && section != "strategy" &&
        section != "run" && section != "scenario") {
      throw Error(ErrorCode::ConfigError, "unknown section [" + section + "]");
    }
  }
  if (auto v = get_opt<std::string>(tree, "scenario.name")) c.name = *v;
  if (auto v = get_opt<std::string>(tree, "graph.family")) c.family = *v;
  if (auto v = get_opt<std::string>(tree, "graph.file")) {
    c.footprint_file = resolve(base_dir, *v).string();
    c.family.clear();
  }
  for (const char* key : {"n", "depth", "d", "k"}) {
    if (auto v = get_opt<std::int64_t>(tree, std::string("graph.") + key)) c.params[key] = *v;
  }
  c.graph_seed = get_opt<std::uint64_t>(tree, "graph.seed");
  if (auto v = get_opt<NodeId>(tree, "graph.home")) c.home = *v;

  const auto kind = get_opt<std::string>(tree, "model.kind").value_or("FTEA");
  c.model = parse_model(kind, get_opt<std::size_t>(tree, "model.T").value_or(1));

  if (auto v = get_opt<std::string>(tree, "adversary.name")) c.adversary = *v;
  if (auto v = get_opt<double>(tree, "adversary.p")) c.removal_probability = *v;
  c.adversary_seed = get_opt<std::uint64_t>(tree, "adversary.seed");
  c.hidden_edge = get_opt<EdgeId>(tree, "adversary.edge");
  if (auto v = get_opt<std::string>(tree, "adversary.file")) c.schedule_file = resolve(base_dir, *v).string();

  if (auto v = get_opt<std::string>(tree, "strategy.name")) c.strategy = *v;
  if (auto v = get_bool(tree, "strategy.strict_visibility")) c.strict_visibility = *v;
  c.node_oracle = get_bool(tree, "strategy.node_oracle");

  if (auto v = get_opt<std::string>(tree, "run.agents")) c.agents = *v;
  if (auto v = get_bool(tree, "run.enforce_budget")) c.enforce_budget = *v;
  if (auto v = get_opt<Round>(tree, "run.max_rounds")) c.max_rounds = *v;
  c.stall_window = get_opt<Round>(tree, "run.stall_window");
  if (auto v = get_opt<std::uint64_t>(tree, "run.seed")) c.seed = *v;
  if (auto v = get_bool(tree, "run.shuffle_exchange")) c.shuffle_exchange = *v;
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open " + file.string());
  ScenarioConfig c = parse_scenario(in, file.parent_path());
  if (c.name == "scenario") c.name = file.stem().string();
  return c;
}

Footprint build_footprint(const ScenarioConfig& c) {
  if (!c.footprint_file.empty()) {
    std::ifstream in(c.footprint_file);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open " + c.footprint_file);
    return read_footprint(in);
  }
  return generate(c.family, c.params, c.graph_seed.value_or(c.seed));
}

std::unique_ptr<Adversary> build_adversary(const ScenarioConfig& c, const Footprint& fp) {
  const std::uint64_t seed = c.adversary_seed.value_or(c.seed);
  if (c.adversary == "static") return std::make_unique<StaticAdversary>();
  if (c.adversary == "wheel_rim") return std::make_unique<WheelRimAdversary>(c.home);
  if (c.adversary == "random") {
    if (c.model.kind == ModelKind::FTEA) return random_ftea_adversary(seed, c.model.T, c.removal_probability);
    return random_ided_adversary(seed, c.removal_probability);
  }
  if (c.adversary == "hide_edge") {
    if (!c.hidden_edge || *c.hidden_edge >= fp.edge_count()) {
      throw Error(ErrorCode::ConfigError, "hide_edge needs a valid adversary.edge");
    }
    return std::make_unique<HideEdgeAdversary>(*c.hidden_edge);
  }
  if (c.adversary == "schedule") {
    std::ifstream in(c.schedule_file);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open schedule " + c.schedule_file);
    return std::make_unique<ScheduleAdversary>(load_schedule(in, fp, c.model));
  }
  throw Error(ErrorCode::ConfigError, "unknown adversary '" + c.adversary + "'");
}

std::string metrics_tsv_header() {
  return "scenario\toutcome\trounds\tagents\tviolations\tnodes_clean\tedges_clean\tn\td\tk";
}

std::string to_tsv(const MetricsRow& r) {
  std::ostringstream s;
  s << r.scenario << '\t' << to_string(r.outcome) << '\t' << r.rounds << '\t' << r.agents << '\t' << r.violations
    << '\t' << r.nodes_clean << '\t' << r.edges_clean << '\t' << r.n << '\t' << r.d << '\t' << r.k;
  return s.str();
}

ScenarioResult run_scenario(const ScenarioConfig& c) {
  const Footprint fp = build_footprint(c);
  auto adversary = build_adversary(c, fp);
  auto strategy = make_strategy(c.strategy);
  ScenarioResult out;
  out.params = graph_parameters(fp);
  out.agents = resolve_agent_formula(c.agents, out.params);
  if (c.enforce_budget) {
    const std::size_t budget = strategy_budget(c.strategy, out.params);
    if (out.agents < budget) {
      throw Error(ErrorCode::InsufficientAgents, c.strategy + " needs " + std::to_string(budget) + " agents, got " +
                                                     std::to_string(out.agents));
    }
  }
  RunSpec spec;
  spec.footprint = &fp;
  spec.model = c.model;
  spec.adversary = adversary.get();
  spec.strategy = strategy.get();
  spec.agent_count = out.agents;
  spec.home = c.home;
  spec.options.max_rounds = c.max_rounds;
  spec.options.stall_window = c.stall_window;
  spec.options.node_oracle = c.node_oracle;
  spec.options.strict_visibility = c.strict_visibility;
  spec.options.shuffle_exchange = c.shuffle_exchange;
  spec.options.shuffle_seed = c.seed;
  spec.options.seed = c.seed;
  out.run = run(spec);

  MetricsRow& m = out.metrics;
  const auto& cfg = out.run.final_configuration;
  m.scenario = c.name;
  m.outcome = out.run.outcome.kind;
  m.rounds = out.run.outcome.round;
  m.agents = out.agents;
  for (const RoundRecord& r : out.run.trace.rounds) m.violations += r.violated_nodes.size() + r.violated_edges.size();
  m.nodes_clean = cfg.contamination.clean_node_count();
  m.edges_clean = cfg.contamination.clean_edge_count();
  m.n = out.params.n;
  m.d = out.params.d;
  m.k = out.params.k;
  return out;
}

// ---- experiments ----

ExperimentConfig parse_experiment(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  ExperimentConfig c;
  const std::string s = "experiment.";
  if (auto v = get_opt<std::string>(tree, s + "corpus")) c.corpus = *v;
  if (auto v = get_opt<std::string>(tree, s + "n")) {
    c.sizes.clear();
    for (const auto& item : split_list(*v)) c.sizes.push_back(to_size(item, "n"));
  }
  if (auto v = get_opt<std::string>(tree, s + "k")) {
    c.extra_edges.clear();
    for (const auto& item : split_list(*v)) c.extra_edges.push_back(to_size(item, "k"));
  }
  if (auto v = get_opt<std::string>(tree, s + "models")) {
    c.models.clear();
    for (const auto& item : split_list(*v)) {
      const auto colon = item.find(':');
      const std::string kind = item.substr(0, colon);
      const std::size_t T = colon == std::string::npos ? 1 : to_size(item.substr(colon + 1), "T");
      c.models.push_back(parse_model(kind, T));
    }
  }
  if (auto v = get_opt<std::string>(tree, s + "budgets")) c.budgets = split_list(*v);
  if (auto v = get_opt<std::string>(tree, s + "strategy")) c.strategy = *v;
  if (auto v = get_opt<std::size_t>(tree, s + "seeds")) c.seeds = *v;
  if (auto v = get_opt<double>(tree, s + "p")) c.removal_probability = *v;
  if (auto v = get_opt<Round>(tree, s + "max_rounds")) c.max_rounds = *v;
  if (auto v = get_opt<unsigned>(tree, s + "threads")) c.threads = *v;
  if (c.corpus != "random_connected" && c.corpus != "wheel") {
    throw Error(ErrorCode::ConfigError, "unknown corpus '" + c.corpus + "'");
  }
  return c;
}

namespace {

std::string strategy_for(const std::string& choice, const std::string& budget, const DynamicityModel& model) {
  if (choice != "auto") return choice;
  if (budget == "n") return "uni";
  if (budget == "d+k") return "modified";
  if (budget == "d+2k") return "infinite";
  return model.kind == ModelKind::FTEA ? "modified" : "infinite";
}

std::string model_label(const DynamicityModel& m) {
  return m.kind == ModelKind::FTEA ? "FTEA(T=" + std::to_string(m.T) + ")" : "IDED";
}

}  // namespace

std::vector<ExperimentCell> expand_experiment(const ExperimentConfig& config) {
  std::vector<ExperimentCell> cells;
  for (std::size_t n : config.sizes) {
    const std::vector<std::size_t> ks =
        config.corpus == "wheel" ? std::vector<std::size_t>{n - 1} : config.extra_edges;
    for (std::size_t k : ks) {
      if (config.corpus == "random_connected" && k > n * (n - 1) / 2 - (n - 1)) continue;
      for (const DynamicityModel& model : config.models) {
        if (config.corpus == "wheel" && model.kind != ModelKind::IDED) continue;
        for (const std::string& budget : config.budgets) {
          for (std::size_t s = 1; s <= config.seeds; ++s) {
            ExperimentCell cell;
            cell.budget = budget;
            cell.regime = k < n ? "k<n" : "k>=n";
            ScenarioConfig& sc = cell.scenario;
            sc.model = model;
            sc.agents = budget;
            sc.seed = s;
            sc.max_rounds = config.max_rounds;
            sc.strategy = strategy_for(config.strategy, budget, model);
            sc.removal_probability = config.removal_probability;
            if (config.corpus == "wheel") {
              sc.family = "wheel";
              sc.params = {{"n", static_cast<std::int64_t>(n)}};
              sc.adversary = "wheel_rim";
            } else {
              sc.family = "random_connected";
              sc.params = {{"n", static_cast<std::int64_t>(n)}, {"k", static_cast<std::int64_t>(k)}};
              sc.adversary = "random";
            }
            sc.name = sc.family + "_n" + std::to_string(n) + "_k" + std::to_string(k) + "_" +
                      (model.kind == ModelKind::FTEA ? "ftea" + std::to_string(model.T) : std::string("ided")) + "_" +
                      budget + "_" + sc.strategy + "_s" + std::to_string(s);
            cells.push_back(std::move(cell));
          }
        }
      }
    }
  }
  return cells;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;
  result.cells = expand_experiment(config);
  result.rows.resize(result.cells.size());
  result.errors.resize(result.cells.size());
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(result.cells.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < result.cells.size(); i = next++) {
      try {
        result.rows[i] = run_scenario(result.cells[i].scenario).metrics;
      } catch (const std::exception& e) {
        result.rows[i].scenario = result.cells[i].scenario.name;
        result.errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return result;
}

void write_summary(std::ostream& out, const ExperimentResult& result) {
  struct Tally {
    std::size_t runs = 0, full = 0, nodes = 0, violated = 0, errors = 0;
  };
  std::map<std::tuple<std::string, std::string, std::string, std::string>, Tally> table;
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const ExperimentCell& cell = result.cells[i];
    Tally& t = table[{model_label(cell.scenario.model), cell.regime, cell.budget, cell.scenario.strategy}];
    ++t.runs;
    if (!result.errors[i].empty()) {
      ++t.errors;
      continue;
    }
    const OutcomeKind kind = result.rows[i].outcome;
    t.full += kind == OutcomeKind::FullSuccess;
    t.nodes += kind == OutcomeKind::FullSuccess || kind == OutcomeKind::NodeSuccess;
    t.violated += kind == OutcomeKind::MonotonicityViolation;
  }
  auto pct = [](std::size_t part, std::size_t whole) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << (whole ? 100.0 * part / whole : 0.0) << '%';
    return s.str();
  };
  out << std::left << std::setw(12) << "model" << std::setw(7) << "k" << std::setw(8) << "budget" << std::setw(10)
      << "strategy" << std::right << std::setw(6) << "runs" << std::setw(9) << "full" << std::setw(9) << "nodes"
      << std::setw(8) << "viol" << std::setw(8) << "errors" << '\n';
  for (const auto& [key, t] : table) {
    const auto& [model, regime, budget, strategy] = key;
    out << std::left << std::setw(12) << model << std::setw(7) << regime << std::setw(8) << budget << std::setw(10)
        << strategy << std::right << std::setw(6) << t.runs << std::setw(9) << pct(t.full, t.runs) << std::setw(9)
        << pct(t.nodes, t.runs) << std::setw(8) << t.violated << std::setw(8) << t.errors << '\n';
  }
  out << "corpus parameters are harness choices; lower bounds are checked against the implemented strategies only\n";
}

}  // namespace decon
