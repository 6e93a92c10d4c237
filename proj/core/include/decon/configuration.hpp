#pragma once

#include <optional>
#include <vector>

#include "decon/contamination.hpp"
#include "decon/memory.hpp"

namespace decon {

struct Agent {
  AgentId id = 0;
  NodeId position = 0;
  Memory memory;
  /// Port of `position` the agent came through in the previous round.
  std::optional<Port> entry_port;
};

/// Consecutive rounds each edge has been absent, ending at the previous round.
struct AbsenceLedger {
  std::vector<std::size_t> absent_for;

  static AbsenceLedger fresh(std::size_t edge_count) { return {std::vector<std::size_t>(edge_count, 0)}; }
  void record(const EdgeMask& present_edges);
};

/// Full simulation snapshot at the end of a round.
struct Configuration {
  Round round = 0;
  EdgeMask present_edges;
  std::vector<Agent> agents;
  ContaminationState contamination;
  AbsenceLedger ledger;

  NodeMask guarded_nodes(std::size_t node_count) const;
};

}  // namespace decon
