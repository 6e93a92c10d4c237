#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "decon/memory.hpp"
#include "decon/view.hpp"

namespace decon {

/// A per-agent policy. Each round the engine calls observe() on every agent
/// (all against views built before any observe call), merges the maps of
/// co-located agents with merge(), then calls step() on fresh views.
/// Implementations are stateless; everything lives in Memory.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string name() const = 0;
  virtual bool requires_node_oracle() const = 0;

  virtual Memory initial_memory(AgentId id) const;
  virtual void observe(const LocalView& view, Memory& mem) const = 0;
  /// Must be commutative and idempotent in `peers`.
  virtual void merge(Memory& mem, std::span<const Memory* const> peers) const;
  virtual Action step(const LocalView& view, Memory& mem) const = 0;
};

/// BFS dispersal from Home: each newly reached node keeps the lowest-id
/// arriving agent, named by that agent's id. The Home agent joins the
/// explorers once Home's ports are exhausted and then acts as the cleaner.
class UniStrategy final : public Strategy {
 public:
  std::string name() const override { return "uni"; }
  bool requires_node_oracle() const override { return false; }
  void observe(const LocalView& view, Memory& mem) const override;
  Action step(const LocalView& view, Memory& mem) const override;
};

/// Group DFS from Home leaving the lowest-id agent on every node with two or
/// more contaminated ports.
class ModifiedStrategy final : public Strategy {
 public:
  std::string name() const override { return "modified"; }
  bool requires_node_oracle() const override { return true; }
  void observe(const LocalView& view, Memory& mem) const override;
  Action step(const LocalView& view, Memory& mem) const override;
};

/// Group DFS with one guard bound to every contaminated missing port.
class InfiniteStrategy final : public Strategy {
 public:
  std::string name() const override { return "infinite"; }
  bool requires_node_oracle() const override { return true; }
  void observe(const LocalView& view, Memory& mem) const override;
  Action step(const LocalView& view, Memory& mem) const override;
};

/// uni, modified, infinite. Throws Error{ConfigError} otherwise.
std::unique_ptr<Strategy> make_strategy(const std::string& name);

struct DfsStep {
  enum class Kind : std::uint8_t { Port, Backtrack, Exhausted };
  Kind kind = Kind::Exhausted;
  Port port = 0;
  /// Backtrack destination: the most recently discovered other node that
  /// still has an unexplored port.
  std::optional<NodeKey> target;
};

using TargetFilter = std::function<bool(NodeKey, const NodeKnowledge&)>;

/// Next DFS move at `mem.here`: the lowest port not known clean, else a
/// backtrack target, else Exhausted. Only nodes accepted by `eligible` are
/// considered as backtrack targets.
DfsStep dfs_next(const Memory& mem, const LocalView& view, const TargetFilter& eligible = {});

/// Clean ports with an unknown far side count as unexplored here: someone
/// else cleaned them and the team has not been through.
bool has_frontier(const NodeKnowledge& info);

/// Most recently discovered node other than `here` with a port not known
/// clean, or known clean but unlinked; ties go to the smaller key.
std::optional<NodeKey> backtrack_target(const KnownMap& map, NodeKey here, const TargetFilter& eligible = {});

}  // namespace decon
