#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "decon/graph.hpp"

namespace decon {

/// Per-node and per-edge contamination flags (true = contaminated).
///
/// An edge keeps its status while it is absent; status belongs to the
/// footprint edge, not to its presence.
struct ContaminationState {
  NodeMask node_contaminated;
  EdgeMask edge_contaminated;

  /// Everything contaminated.
  static ContaminationState initial(const Footprint& fp);

  bool all_nodes_clean() const noexcept;
  bool all_clean() const noexcept;
  std::size_t clean_node_count() const noexcept;
  std::size_t clean_edge_count() const noexcept;

  friend bool operator==(const ContaminationState&, const ContaminationState&) = default;
};

/// Elements that went from clean to contaminated.
struct ViolationReport {
  Round round = 0;
  std::vector<NodeId> recontaminated_nodes;
  std::vector<EdgeId> recontaminated_edges;

  bool empty() const noexcept { return recontaminated_nodes.empty() && recontaminated_edges.empty(); }
};

struct Traversal {
  AgentId agent = 0;
  EdgeId edge = 0;
};

struct Arrival {
  AgentId agent = 0;
  NodeId node = 0;
};

/// Marks traversed edges and occupied nodes clean. Throws Error{EdgeAbsent}
/// when a traversal uses an edge that is not present.
ContaminationState apply_agent_actions(const Footprint& fp, ContaminationState state,
                                       const EdgeMask& present_edges,
                                       std::span<const Traversal> traversals,
                                       std::span<const Arrival> arrivals);

/// Recontamination closure. A clean unguarded node is contaminated by a
/// present contaminated incident edge or a present edge to a contaminated
/// neighbour; a clean present edge is contaminated by a contaminated endpoint
/// whether or not that endpoint is guarded. Absent edges neither carry nor
/// receive contamination. Returns the least fixpoint and every flip.
std::pair<ContaminationState, ViolationReport> spread(const Footprint& fp, ContaminationState state,
                                                      const EdgeMask& present_edges,
                                                      const NodeMask& guarded_nodes);

/// Contaminated ports at v, absent edges included.
struct ContaminationDegree {
  std::size_t count = 0;
  std::vector<Port> ports;
};

ContaminationDegree contamination_degree(const ContaminationState& state, const Footprint& fp,
                                         NodeId v);

/// Ports of v whose edges are both contaminated and present.
std::vector<Port> visible_contaminated_ports(const ContaminationState& state,
                                             const EdgeMask& present_edges, const Footprint& fp,
                                             NodeId v);

/// Nodes with contamination degree > 0.
std::vector<NodeId> separator_set(const ContaminationState& state, const Footprint& fp);

bool is_fully_decontaminated(const ContaminationState& state, const Footprint& fp, NodeId v);

}  // namespace decon
