#include "decon/contamination.hpp"

#include <algorithm>
#include <deque>

namespace decon {

ContaminationState ContaminationState::initial(const Footprint& fp) {
  return ContaminationState{NodeMask(fp.node_count(), true), EdgeMask(fp.edge_count(), true)};
}

bool ContaminationState::all_nodes_clean() const noexcept {
  return std::none_of(node_contaminated.begin(), node_contaminated.end(), [](bool b) { return b; });
}

bool ContaminationState::all_clean() const noexcept {
  return all_nodes_clean() &&
         std::none_of(edge_contaminated.begin(), edge_contaminated.end(), [](bool b) { return b; });
}

std::size_t ContaminationState::clean_node_count() const noexcept {
  return static_cast<std::size_t>(
      std::count(node_contaminated.begin(), node_contaminated.end(), false));
}

std::size_t ContaminationState::clean_edge_count() const noexcept {
  return static_cast<std::size_t>(
      std::count(edge_contaminated.begin(), edge_contaminated.end(), false));
}

ContaminationState apply_agent_actions(const Footprint& fp, ContaminationState state,
                                       const EdgeMask& present_edges,
                                       std::span<const Traversal> traversals,
                                       std::span<const Arrival> arrivals) {
  for (const Traversal& t : traversals) {
    if (t.edge >= fp.edge_count() || !present_edges[t.edge]) {
      throw Error(ErrorCode::EdgeAbsent, "agent " + std::to_string(t.agent) +
                                             " traversed absent edge " + std::to_string(t.edge));
    }
    state.edge_contaminated[t.edge] = false;
  }
  for (const Arrival& a : arrivals) state.node_contaminated.at(a.node) = false;
  return state;
}

std::pair<ContaminationState, ViolationReport> spread(const Footprint& fp, ContaminationState state,
                                                      const EdgeMask& present_edges,
                                                      const NodeMask& guarded_nodes) {
  ViolationReport report;
  std::deque<NodeId> work;
  for (NodeId v = 0; v < fp.node_count(); ++v) {
    if (state.node_contaminated[v]) work.push_back(v);
  }
  auto infect_node = [&](NodeId v) {
    if (state.node_contaminated[v] || guarded_nodes[v]) return;
    state.node_contaminated[v] = true;
    report.recontaminated_nodes.push_back(v);
    work.push_back(v);
  };
  // Present contaminated edges reach both endpoints.
  for (EdgeId e = 0; e < fp.edge_count(); ++e) {
    if (present_edges[e] && state.edge_contaminated[e]) {
      infect_node(fp.edge(e).u);
      infect_node(fp.edge(e).v);
    }
  }
  while (!work.empty()) {
    NodeId v = work.front();
    work.pop_front();
    for (const Incidence& inc : fp.ports(v)) {
      if (!present_edges[inc.edge]) continue;
      if (!state.edge_contaminated[inc.edge]) {
        state.edge_contaminated[inc.edge] = true;
        report.recontaminated_edges.push_back(inc.edge);
      }
      infect_node(inc.neighbor);
    }
  }
  std::sort(report.recontaminated_nodes.begin(), report.recontaminated_nodes.end());
  std::sort(report.recontaminated_edges.begin(), report.recontaminated_edges.end());
  return {std::move(state), std::move(report)};
}

ContaminationDegree contamination_degree(const ContaminationState& state, const Footprint& fp,
                                         NodeId v) {
  ContaminationDegree out;
  auto ports = fp.ports(v);
  for (Port p = 0; p < ports.size(); ++p) {
    if (state.edge_contaminated[ports[p].edge]) out.ports.push_back(p);
  }
  out.count = out.ports.size();
  return out;
}

std::vector<Port> visible_contaminated_ports(const ContaminationState& state,
                                             const EdgeMask& present_edges, const Footprint& fp,
                                             NodeId v) {
  std::vector<Port> out;
  auto ports = fp.ports(v);
  for (Port p = 0; p < ports.size(); ++p) {
    if (present_edges[ports[p].edge] && state.edge_contaminated[ports[p].edge]) out.push_back(p);
  }
  return out;
}

std::vector<NodeId> separator_set(const ContaminationState& state, const Footprint& fp) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < fp.node_count(); ++v) {
    if (contamination_degree(state, fp, v).count > 0) out.push_back(v);
  }
  return out;
}

bool is_fully_decontaminated(const ContaminationState& state, const Footprint& fp, NodeId v) {
  return !state.node_contaminated.at(v) && contamination_degree(state, fp, v).count == 0;
}

}  // namespace decon
