#include "decon/engine.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "rng_util.hpp"

namespace decon {

Round default_stall_window(std::size_t node_count, const DynamicityModel& model) {
  const Round n = node_count;
  return model.kind == ModelKind::FTEA ? 4 * n * (model.T + 1) : 4 * n * n;
}

NodeKey node_handle(NodeId v) noexcept {
  std::uint64_t z = std::uint64_t{v} + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

MemorySnapshots snapshot_memories(const Configuration& config) {
  MemorySnapshots out;
  out.reserve(config.agents.size());
  for (const Agent& a : config.agents) out.push_back(std::make_shared<const Memory>(a.memory));
  return out;
}

LocalView local_view(const Configuration& config, const Footprint& fp, NodeId node, AgentId self,
                     const ViewOptions& options) {
  return local_view(config, fp, node, self, options, snapshot_memories(config));
}

LocalView local_view(const Configuration& config, const Footprint& fp, NodeId node, AgentId self,
                     const ViewOptions& options, const MemorySnapshots& snapshots) {
  LocalView view;
  view.round = config.round;
  view.self = self;
  view.node_degree = fp.degree(node);
  view.node_contaminated = config.contamination.node_contaminated.at(node);
  for (Port p = 0; p < view.node_degree; ++p) {
    const EdgeId e = fp.via(node, p).edge;
    PortView pv{p, bool(config.present_edges.at(e)), std::nullopt};
    if (pv.present || !options.strict_visibility) pv.edge_contaminated = bool(config.contamination.edge_contaminated[e]);
    if (!pv.present) view.missing_ports.push_back(p);
    view.ports.push_back(pv);
  }
  for (std::size_t i = 0; i < config.agents.size(); ++i) {
    const Agent& a = config.agents[i];
    if (a.position != node) continue;
    view.co_located_agents.push_back({a.id, snapshots.at(i)});
    if (a.id == self) view.entry_port = a.entry_port;
  }
  std::sort(view.co_located_agents.begin(), view.co_located_agents.end(),
            [](const PeerView& a, const PeerView& b) { return a.id < b.id; });
  view.agent_count_here = view.co_located_agents.size();
  if (options.node_oracle) view.node = node_handle(node);
  return view;
}

void exchange(const Strategy& strategy, std::span<Agent* const> group, std::mt19937_64* shuffle) {
  if (group.size() < 2) return;
  std::vector<Memory> snapshot;
  snapshot.reserve(group.size());
  for (const Agent* a : group) snapshot.push_back(a->memory);
  std::vector<const Memory*> order;
  for (const Memory& m : snapshot) order.push_back(&m);
  for (Agent* a : group) {
    if (shuffle) detail::shuffle(order, *shuffle);
    strategy.merge(a->memory, order);
  }
}

bool is_quiet(const RoundRecord& previous, const RoundRecord& current) {
  const bool still = std::all_of(current.agents.begin(), current.agents.end(),
                                 [](const AgentRecord& a) { return !a.action.is_move(); });
  return still && previous.nodes == current.nodes && previous.edges == current.edges &&
         previous.absent == current.absent;
}

bool detect_stall(std::span<const RoundRecord> window) {
  if (window.size() < 2) return false;
  for (std::size_t i = 1; i < window.size(); ++i) {
    if (!is_quiet(window[i - 1], window[i])) return false;
  }
  return true;
}

namespace {

TraceHeader make_header(const RunSpec& spec, Round stall_window) {
  TraceHeader h;
  h.seed = spec.options.seed;
  h.node_count = spec.footprint->node_count();
  h.edges = spec.footprint->edges();
  h.model = spec.model;
  h.home = spec.home;
  h.strategy = spec.strategy->name();
  h.adversary = spec.adversary->name();
  h.agents = spec.agent_count;
  h.stall_window = stall_window;
  h.max_rounds = spec.options.max_rounds;
  h.scenario_hash = scenario_hash(h);
  return h;
}

RoundRecord snapshot(const Configuration& config, const std::vector<Action>& actions) {
  RoundRecord r;
  r.round = config.round;
  for (EdgeId e = 0; e < config.present_edges.size(); ++e) {
    if (!config.present_edges[e]) r.absent.push_back(e);
  }
  for (std::size_t i = 0; i < config.agents.size(); ++i) {
    r.agents.push_back({config.agents[i].id, config.agents[i].position, actions[i]});
  }
  r.nodes = config.contamination.node_contaminated;
  r.edges = config.contamination.edge_contaminated;
  return r;
}

std::string list_ids(const char* what, const std::vector<std::uint32_t>& ids) {
  std::string out = what;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : " ") + std::to_string(ids[i]);
  return out;
}

class Runner {
 public:
  explicit Runner(const RunSpec& spec) : spec_(spec), fp_(*spec.footprint), strategy_(*spec.strategy) {
    if (spec.agent_count < 1) throw Error(ErrorCode::BadParams, "agent_count must be >= 1");
    if (spec.home >= fp_.node_count()) throw Error(ErrorCode::BadParams, "home out of range");
    if (spec.options.max_rounds < 1) throw Error(ErrorCode::BadParams, "max_rounds must be >= 1");
    view_options_.node_oracle = spec.options.node_oracle.value_or(strategy_.requires_node_oracle());
    view_options_.strict_visibility = spec.options.strict_visibility;
    if (strategy_.requires_node_oracle() && !view_options_.node_oracle) {
      throw Error(ErrorCode::ConfigError, strategy_.name() + " needs the node-identity oracle");
    }
    stall_window_ = spec.options.stall_window.value_or(default_stall_window(fp_.node_count(), spec.model));
    if (spec.options.shuffle_exchange) shuffle_.emplace(spec.options.shuffle_seed);
  }

  RunResult execute() {
    RunResult result;
    result.trace.header = make_header(spec_, stall_window_);
    Configuration& cfg = config_;
    cfg.present_edges.assign(fp_.edge_count(), true);
    cfg.ledger = AbsenceLedger::fresh(fp_.edge_count());
    cfg.contamination = ContaminationState::initial(fp_);
    cfg.contamination.node_contaminated[spec_.home] = false;
    for (std::size_t i = 0; i < spec_.agent_count; ++i) {
      const auto id = static_cast<AgentId>(i + 1);
      cfg.agents.push_back({id, spec_.home, strategy_.initial_memory(id), std::nullopt});
    }
    observe_and_exchange();
    std::vector<Action> actions(cfg.agents.size(), Action::stay());
    result.trace.rounds.push_back(snapshot(cfg, actions));
    if (cfg.contamination.all_nodes_clean()) result.all_nodes_clean_at = 0;

    auto finish = [&](OutcomeKind kind, std::string detail) {
      result.outcome = {kind, cfg.round, std::move(detail)};
      result.trace.outcome = result.outcome;
      result.final_configuration = cfg;
      return result;
    };
    if (cfg.contamination.all_clean()) return finish(OutcomeKind::FullSuccess, "clean at placement");

    Round quiet = 0;
    for (Round t = 1; t <= spec_.options.max_rounds; ++t) {
      AdversaryDecision decision = spec_.adversary->step(fp_, spec_.model, cfg);
      if (auto violation = validate_decision(fp_, spec_.model, cfg.ledger, decision)) {
        cfg.round = t;
        return finish(OutcomeKind::ModelViolation, describe(*violation));
      }
      cfg.round = t;
      cfg.ledger.record(decision.present_edges);
      cfg.present_edges = std::move(decision.present_edges);

      observe_and_exchange();
      const MemorySnapshots memories = snapshot_memories(cfg);
      std::vector<LocalView> views;
      views.reserve(cfg.agents.size());
      for (const Agent& a : cfg.agents) views.push_back(local_view(cfg, fp_, a.position, a.id, view_options_, memories));
      for (std::size_t i = 0; i < cfg.agents.size(); ++i) {
        Agent& a = cfg.agents[i];
        const LocalView& view = views[i];
        actions[i] = strategy_.step(view, a.memory);
        if (actions[i].is_move() &&
            (actions[i].port >= view.node_degree || !view.ports[actions[i].port].present)) {
          throw std::logic_error(strategy_.name() + ": agent " + std::to_string(a.id) + " moved through " +
                                 "an unusable port at round " + std::to_string(t));
        }
      }

      std::vector<Traversal> traversals;
      std::vector<Arrival> arrivals;
      for (std::size_t i = 0; i < cfg.agents.size(); ++i) {
        Agent& a = cfg.agents[i];
        if (!actions[i].is_move()) {
          a.entry_port.reset();
          continue;
        }
        const Incidence& inc = fp_.via(a.position, actions[i].port);
        traversals.push_back({a.id, inc.edge});
        arrivals.push_back({a.id, inc.neighbor});
        a.position = inc.neighbor;
        a.entry_port = inc.remote_port;
        ++result.moves;
      }
      const ContaminationState before = cfg.contamination;
      ContaminationState after = apply_agent_actions(fp_, before, cfg.present_edges, traversals, arrivals);
      after = spread(fp_, std::move(after), cfg.present_edges, cfg.guarded_nodes(fp_.node_count())).first;
      cfg.contamination = std::move(after);

      RoundRecord record = snapshot(cfg, actions);
      for (NodeId v = 0; v < fp_.node_count(); ++v) {
        if (!before.node_contaminated[v] && cfg.contamination.node_contaminated[v]) record.violated_nodes.push_back(v);
      }
      for (EdgeId e = 0; e < fp_.edge_count(); ++e) {
        if (!before.edge_contaminated[e] && cfg.contamination.edge_contaminated[e]) record.violated_edges.push_back(e);
      }
      const bool violated = !record.violated_nodes.empty() || !record.violated_edges.empty();
      std::string violation_detail;
      if (violated) {
        violation_detail = list_ids("nodes", record.violated_nodes) + "; " + list_ids("edges", record.violated_edges);
      }
      quiet = is_quiet(result.trace.rounds.back(), record) ? quiet + 1 : 0;
      result.trace.rounds.push_back(std::move(record));

      if (violated) return finish(OutcomeKind::MonotonicityViolation, violation_detail);
      if (!result.all_nodes_clean_at && cfg.contamination.all_nodes_clean()) result.all_nodes_clean_at = t;
      if (cfg.contamination.all_clean()) return finish(OutcomeKind::FullSuccess, "");
      if (stall_window_ > 0 && quiet >= stall_window_) {
        if (cfg.contamination.all_nodes_clean()) {
          return finish(OutcomeKind::NodeSuccess,
                        std::to_string(fp_.edge_count() - cfg.contamination.clean_edge_count()) +
                            " edges contaminated");
        }
        return finish(OutcomeKind::Stall, std::to_string(cfg.contamination.clean_node_count()) + "/" +
                                              std::to_string(fp_.node_count()) + " nodes clean");
      }
    }
    return finish(OutcomeKind::RoundLimit, "");
  }

 private:
  void observe_and_exchange() {
    const MemorySnapshots memories = snapshot_memories(config_);
    std::vector<LocalView> views;
    views.reserve(config_.agents.size());
    for (const Agent& a : config_.agents) {
      views.push_back(local_view(config_, fp_, a.position, a.id, view_options_, memories));
    }
    for (std::size_t i = 0; i < config_.agents.size(); ++i) strategy_.observe(views[i], config_.agents[i].memory);
    std::map<NodeId, std::vector<Agent*>> groups;
    for (Agent& a : config_.agents) groups[a.position].push_back(&a);
    for (auto& [node, group] : groups) exchange(strategy_, group, shuffle_ ? &*shuffle_ : nullptr);
  }

  const RunSpec& spec_;
  const Footprint& fp_;
  const Strategy& strategy_;
  ViewOptions view_options_;
  Round stall_window_ = 0;
  std::optional<std::mt19937_64> shuffle_;
  Configuration config_;
};

}  // namespace

RunResult run(const RunSpec& spec) {
  if (!spec.footprint || !spec.adversary || !spec.strategy) throw Error(ErrorCode::BadParams, "incomplete run spec");
  return Runner(spec).execute();
}

}  // namespace decon
