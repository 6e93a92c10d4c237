#include "decon/strategy.hpp"

#include <algorithm>
#include <charconv>

namespace decon {

std::string to_string(const Action& action) {
  switch (action.kind) {
    case Action::Kind::Stay: return "S";
    case Action::Kind::Settle: return "T";
    case Action::Kind::Move: return "M" + std::to_string(action.port);
  }
  return "?";
}

std::optional<Action> parse_action(const std::string& text) {
  if (text == "S") return Action::stay();
  if (text == "T") return Action::settle();
  if (text.size() < 2 || text[0] != 'M') return std::nullopt;
  Port p = 0;
  auto [ptr, ec] = std::from_chars(text.data() + 1, text.data() + text.size(), p);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return Action::move(p);
}

Memory Strategy::initial_memory(AgentId) const { return {}; }

void Strategy::merge(Memory& mem, std::span<const Memory* const> peers) const {
  mem.map = merge_knowledge(peers);
}

namespace {

bool port_present(const LocalView& view, Port p) { return p < view.ports.size() && view.ports[p].present; }

std::size_t rank_of(const LocalView& view) {
  std::size_t rank = 0;
  for (const PeerView& peer : view.co_located_agents) rank += peer.id < view.self ? 1 : 0;
  return rank;
}

Action move_and_remember(Memory& mem, Port p) {
  mem.last_move = std::make_pair(*mem.here, p);
  mem.exploring = !mem.map.at(*mem.here).ports.at(p).neighbor.has_value();
  return Action::move(p);
}

Action stay(Memory& mem) {
  mem.last_move.reset();
  mem.exploring = false;
  return Action::stay();
}

Action head_for(const LocalView& view, Memory& mem, NodeKey target) {
  if (auto hop = mem.map.next_hop(*mem.here, target, view.missing_ports)) return move_and_remember(mem, *hop);
  return stay(mem);
}

// ---- uni ----

std::optional<NodeKey> earliest_unfinished(const KnownMap& map) {
  std::optional<NodeKey> best;
  Round best_round = 0;
  for (const auto& [key, info] : map.nodes()) {
    if (info.finished()) continue;
    if (!best || info.discovered < best_round) {
      best = key;
      best_round = info.discovered;
    }
  }
  return best;
}

std::optional<Action> uni_plan(const LocalView& view, const Memory& mem) {
  auto target = earliest_unfinished(mem.map);
  if (!target) return std::nullopt;
  const NodeKey here = *mem.here;
  if (*target == here) {
    const auto& ports = mem.map.at(here).ports;
    for (Port p = 0; p < ports.size(); ++p) {
      if (!ports[p].clean && port_present(view, p)) return Action::move(p);
    }
    return std::nullopt;
  }
  if (auto hop = mem.map.next_hop(here, *target, view.missing_ports)) return Action::move(*hop);
  return std::nullopt;
}

bool is_home_keeper(const LocalView& view, const Memory& mem) {
  return mem.role == Role::Settled && mem.here == NodeKey{view.self} && mem.map.at(*mem.here).discovered == 0;
}

// ---- oracle strategies ----

void sync_with_oracle(const LocalView& view, Memory& mem) {
  const NodeKey here = view.node.value();
  mem.map.touch(here, view.node_degree, view.round);
  if (mem.last_move && view.entry_port && mem.map.contains(mem.last_move->first)) {
    mem.map.link(mem.last_move->first, mem.last_move->second, here, *view.entry_port);
  }
  mem.last_move.reset();
  mem.exploring = false;
  for (const PortView& pv : view.ports) {
    if (pv.edge_contaminated == false) mem.map.mark_clean(here, pv.port);
    mem.map.observe_presence(here, pv.port, pv.present, view.round);
  }
  mem.here = here;
}

std::vector<Port> unexplored_ports(const Memory& mem) {
  std::vector<Port> out;
  const auto& ports = mem.map.at(*mem.here).ports;
  for (Port p = 0; p < ports.size(); ++p) {
    if (!ports[p].clean) out.push_back(p);
  }
  return out;
}

/// Separator guards (Settled) hold their node until a mobile agent arrives.
bool group_present(const LocalView& view) {
  return std::any_of(view.co_located_agents.begin(), view.co_located_agents.end(),
                     [](const PeerView& peer) { return peer.memory->role != Role::Settled; });
}

}  // namespace

bool has_frontier(const NodeKnowledge& info) {
  return std::any_of(info.ports.begin(), info.ports.end(),
                     [](const PortKnowledge& pk) { return !pk.clean || !pk.neighbor; });
}

std::optional<NodeKey> backtrack_target(const KnownMap& map, NodeKey here, const TargetFilter& eligible) {
  std::optional<NodeKey> best;
  Round best_round = 0;
  for (const auto& [key, info] : map.nodes()) {
    if (key == here || !has_frontier(info)) continue;
    if (eligible && !eligible(key, info)) continue;
    if (!best || info.discovered > best_round) {
      best = key;
      best_round = info.discovered;
    }
  }
  return best;
}

DfsStep dfs_next(const Memory& mem, const LocalView&, const TargetFilter& eligible) {
  const auto ports = unexplored_ports(mem);
  if (!ports.empty()) return {DfsStep::Kind::Port, ports.front(), std::nullopt};
  if (auto target = backtrack_target(mem.map, mem.here.value(), eligible)) {
    return {DfsStep::Kind::Backtrack, 0, target};
  }
  return {DfsStep::Kind::Exhausted, 0, std::nullopt};
}

namespace {

/// Leaves a node with no contaminated port: first through a present port
/// whose far side is still unknown, else toward the backtrack target.
Action sweep_on(const LocalView& view, Memory& mem, const TargetFilter& eligible) {
  const auto& ports = mem.map.at(*mem.here).ports;
  for (Port p = 0; p < ports.size(); ++p) {
    if (!ports[p].neighbor && port_present(view, p)) return move_and_remember(mem, p);
  }
  if (auto target = backtrack_target(mem.map, *mem.here, eligible)) return head_for(view, mem, *target);
  return stay(mem);
}

}  // namespace

void UniStrategy::observe(const LocalView& view, Memory& mem) const {
  if (!mem.here) {
    const AgentId keeper = view.co_located_agents.front().id;
    if (keeper == view.self) mem.role = Role::Settled;
    mem.here = keeper;
    mem.map.touch(keeper, view.node_degree, view.round);
    return;
  }
  if (!mem.last_move || !view.entry_port) return;
  const auto [from, port] = *mem.last_move;
  NodeKey label = 0;
  if (mem.exploring) {
    std::optional<NodeKey> named;
    for (const PeerView& peer : view.co_located_agents) {
      if (peer.id != view.self && peer.memory->role == Role::Settled) named = peer.memory->here;
    }
    if (!named) {
      std::optional<AgentId> settler;
      for (const PeerView& peer : view.co_located_agents) {
        if (peer.memory->role == Role::Mobile) {
          settler = peer.id;
          break;
        }
      }
      if (!settler) settler = view.co_located_agents.front().id;
      if (*settler == view.self) mem.role = Role::Settled;
      named = *settler;
    }
    label = *named;
  } else {
    label = mem.map.at(from).ports.at(port).neighbor.value();
  }
  mem.map.touch(label, view.node_degree, view.round);
  mem.map.link(from, port, label, *view.entry_port);
  mem.here = label;
  mem.last_move.reset();
  mem.exploring = false;
}

Action UniStrategy::step(const LocalView& view, Memory& mem) const {
  if (mem.role == Role::Settled) {
    if (!is_home_keeper(view, mem)) return stay(mem);
    const bool explorers_here =
        std::any_of(view.co_located_agents.begin(), view.co_located_agents.end(),
                    [](const PeerView& peer) { return peer.memory->role != Role::Settled; });
    if (!explorers_here) return stay(mem);
    const auto plan = uni_plan(view, mem);
    const auto& ports = mem.map.at(*mem.here).ports;
    for (Port p = 0; p < ports.size(); ++p) {
      if (!ports[p].clean && !(plan && plan->is_move() && plan->port == p)) return stay(mem);
    }
    mem.role = Role::Cleaner;
  }
  const auto plan = uni_plan(view, mem);
  if (!plan) return stay(mem);
  return move_and_remember(mem, plan->port);
}

void ModifiedStrategy::observe(const LocalView& view, Memory& mem) const { sync_with_oracle(view, mem); }

Action ModifiedStrategy::step(const LocalView& view, Memory& mem) const {
  if (!group_present(view)) return stay(mem);
  mem.role = Role::Mobile;
  const auto contaminated = unexplored_ports(mem);
  if (contaminated.empty()) return sweep_on(view, mem, {});
  if (contaminated.size() >= 2 && rank_of(view) == 0) {
    mem.role = Role::Settled;
    return stay(mem);
  }
  if (!port_present(view, contaminated.front())) return stay(mem);
  return move_and_remember(mem, contaminated.front());
}

void InfiniteStrategy::observe(const LocalView& view, Memory& mem) const { sync_with_oracle(view, mem); }

Action InfiniteStrategy::step(const LocalView& view, Memory& mem) const {
  if (!group_present(view)) return stay(mem);
  mem.role = Role::Mobile;
  std::vector<Port> missing, visible;
  for (Port p : unexplored_ports(mem)) (port_present(view, p) ? visible : missing).push_back(p);
  const std::size_t rank = rank_of(view);
  if (rank < missing.size()) return stay(mem);
  const std::size_t free_rank = rank - missing.size();
  if (visible.size() > 1 && free_rank == 0) {
    mem.role = Role::Settled;
    return stay(mem);
  }
  if (!visible.empty()) return move_and_remember(mem, visible.front());
  // Nodes whose open ports were all last seen missing already hold guards.
  const TargetFilter open = [](NodeKey, const NodeKnowledge& info) {
    return std::any_of(info.ports.begin(), info.ports.end(), [](const PortKnowledge& pk) {
      return (!pk.clean || !pk.neighbor) && !pk.observed_missing;
    });
  };
  const bool blocked_here = !mem.map.at(*mem.here).finished();
  if (blocked_here || backtrack_target(mem.map, *mem.here, open)) return sweep_on(view, mem, open);
  // Nothing open: revisit a guarded node, whose missing edges may be back.
  return sweep_on(view, mem, {});
}

std::unique_ptr<Strategy> make_strategy(const std::string& name) {
  if (name == "uni") return std::make_unique<UniStrategy>();
  if (name == "modified") return std::make_unique<ModifiedStrategy>();
  if (name == "infinite") return std::make_unique<InfiniteStrategy>();
  throw Error(ErrorCode::ConfigError, "unknown strategy '" + name + "'");
}

}  // namespace decon
