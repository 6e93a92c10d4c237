#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "decon/types.hpp"

namespace decon {

/// Name an agent uses for a node. Under the node-identity oracle it is the
/// opaque handle the engine hands out; without it, the id of the agent that
/// settled there.
using NodeKey = std::uint64_t;

struct PortKnowledge {
  bool clean = false;
  std::optional<NodeKey> neighbor;
  std::optional<Port> remote_port;
  /// Most recent observation of this port's presence.
  std::optional<Round> observed_at;
  bool observed_missing = false;

  friend bool operator==(const PortKnowledge&, const PortKnowledge&) = default;
};

struct NodeKnowledge {
  Round discovered = 0;
  std::vector<PortKnowledge> ports;

  bool finished() const noexcept;

  friend bool operator==(const NodeKnowledge&, const NodeKnowledge&) = default;
};

/// What a team has learned about the footprint. Merging is a join: clean
/// wins, earliest discovery wins, newest presence observation wins.
class KnownMap {
 public:
  const std::map<NodeKey, NodeKnowledge>& nodes() const noexcept { return nodes_; }
  bool contains(NodeKey key) const { return nodes_.count(key) > 0; }
  const NodeKnowledge& at(NodeKey key) const { return nodes_.at(key); }

  /// Registers a node seen at `round` with `degree` ports; keeps the earlier
  /// discovery round when already known.
  NodeKnowledge& touch(NodeKey key, std::size_t degree, Round round);

  /// Records that port `pa` of `a` and port `pb` of `b` are the same edge,
  /// and that the edge has been traversed.
  void link(NodeKey a, Port pa, NodeKey b, Port pb);

  void mark_clean(NodeKey key, Port p);
  void observe_presence(NodeKey key, Port p, bool present, Round round);

  void merge(const KnownMap& other);

  /// First hop of a shortest path over linked ports. `blocked` lists ports
  /// of `from` that must not be used this round.
  std::optional<Port> next_hop(NodeKey from, NodeKey to, std::span<const Port> blocked = {}) const;

  friend bool operator==(const KnownMap&, const KnownMap&) = default;

 private:
  std::map<NodeKey, NodeKnowledge> nodes_;
};

enum class Role : std::uint8_t { Mobile, Settled, Cleaner };

std::string_view to_string(Role role) noexcept;

/// Per-agent memory. `map` is shared knowledge and is what co-located agents
/// exchange; the remaining fields are private to the agent.
struct Memory {
  Role role = Role::Mobile;
  KnownMap map;
  std::optional<NodeKey> here;
  /// Where the last move started: (node, port).
  std::optional<std::pair<NodeKey, Port>> last_move;
  /// Set when the last move took a port whose far side was unknown.
  bool exploring = false;

  friend bool operator==(const Memory&, const Memory&) = default;
};

/// Join of the shared knowledge of a group. Commutative, associative and
/// idempotent.
KnownMap merge_knowledge(std::span<const Memory* const> group);

std::string serialize(const Memory& memory);
Memory deserialize_memory(const std::string& text);

}  // namespace decon
