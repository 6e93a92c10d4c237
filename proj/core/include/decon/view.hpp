#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "decon/memory.hpp"
#include "decon/types.hpp"

namespace decon {

struct PortView {
  Port port = 0;
  bool present = false;
  /// Empty when the status of an absent edge is hidden (strict visibility).
  std::optional<bool> edge_contaminated;
};

struct PeerView {
  AgentId id = 0;
  /// Taken before anyone at the node acted this phase; shared between views.
  std::shared_ptr<const Memory> memory;
};

/// Everything an agent perceives at its node in one round. There is no node
/// id here; `node` is filled only when the node-identity oracle is enabled.
struct LocalView {
  Round round = 0;
  AgentId self = 0;
  /// Port of this node through which `self` arrived in the previous round.
  std::optional<Port> entry_port;
  std::size_t node_degree = 0;
  std::vector<PortView> ports;
  bool node_contaminated = false;
  std::vector<Port> missing_ports;
  std::size_t agent_count_here = 0;
  /// All agents at the node, `self` included, ascending by id.
  std::vector<PeerView> co_located_agents;
  std::optional<NodeKey> node;

  std::size_t missing_count() const noexcept { return missing_ports.size(); }
};

struct Action {
  enum class Kind : std::uint8_t { Stay, Move, Settle };
  Kind kind = Kind::Stay;
  Port port = 0;

  static Action stay() { return {}; }
  static Action settle() { return {Kind::Settle, 0}; }
  static Action move(Port p) { return {Kind::Move, p}; }

  bool is_move() const noexcept { return kind == Kind::Move; }

  friend bool operator==(const Action&, const Action&) = default;
};

/// "S", "T" (settle) or "M<port>".
std::string to_string(const Action& action);
std::optional<Action> parse_action(const std::string& text);

}  // namespace decon
