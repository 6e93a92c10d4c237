#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decon/types.hpp"

namespace decon {

/// Undirected edge with a port label at each endpoint. Canonical form keeps u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  Port pu = 0;
  Port pv = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// What an agent finds behind port p of a node.
struct Incidence {
  EdgeId edge = 0;
  NodeId neighbor = 0;
  Port remote_port = 0;

  friend bool operator==(const Incidence&, const Incidence&) = default;
};

/// Static, port-labelled, simple, connected footprint graph.
///
/// Edges are stored in canonical order (lexicographic by (u, v) with u < v); an
/// EdgeId is an index into that order. Immutable after construction.
class Footprint {
 public:
  /// Validates and canonicalises. Throws Error{SelfLoop, DuplicateEdge,
  /// PortClash, NodeOutOfRange, Disconnected, BadN}.
  static Footprint build(std::size_t node_count, std::span<const Edge> edges);

  /// Assigns ports by ascending neighbour id at every node.
  static Footprint from_pairs(std::size_t node_count,
                              std::span<const std::pair<NodeId, NodeId>> pairs);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }

  std::size_t degree(NodeId v) const { return adjacency_.at(v).size(); }
  std::size_t max_degree() const noexcept;

  /// Incidences of v indexed by port.
  std::span<const Incidence> ports(NodeId v) const { return adjacency_.at(v); }
  const Incidence& via(NodeId v, Port p) const { return adjacency_.at(v).at(p); }

  std::optional<EdgeId> find_edge(NodeId a, NodeId b) const;

  /// Port of `e` at endpoint `v`.
  Port port_at(EdgeId e, NodeId v) const;
  NodeId other_end(EdgeId e, NodeId v) const;

  friend bool operator==(const Footprint&, const Footprint&) = default;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
};

struct SpanningDecomposition {
  NodeId root = 0;
  std::vector<EdgeId> tree_edges;
  std::vector<EdgeId> feedback_edges;
};

/// |E| - |V| + 1.
std::size_t cyclomatic_number(const Footprint& fp) noexcept;

/// BFS spanning tree from root; the frontier node expands its ports in
/// ascending order, so the result is a function of (fp, root) only.
SpanningDecomposition spanning_decomposition(const Footprint& fp, NodeId root);

/// Hop distances from `source` over the whole footprint.
std::vector<std::size_t> bfs_distances(const Footprint& fp, NodeId source);

/// Eccentricity of a node in the footprint.
std::size_t eccentricity(const Footprint& fp, NodeId v);

std::size_t diameter(const Footprint& fp);

/// True iff (V, active_edges) is connected.
bool is_connected(const Footprint& fp, const EdgeMask& active_edges);

/// Edge-list connectivity used during validation, before a Footprint exists.
bool is_connected(std::size_t node_count, std::span<const Edge> edges,
                  const EdgeMask* active = nullptr);

// Text format: header `n <count>`, then one `u v pu pv` line per edge in
// canonical order. Lines starting with '#' are ignored on input.
void write_footprint(std::ostream& out, const Footprint& fp);
std::string footprint_to_string(const Footprint& fp);
Footprint read_footprint(std::istream& in);
Footprint footprint_from_string(const std::string& text);

}  // namespace decon
