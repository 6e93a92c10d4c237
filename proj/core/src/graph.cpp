#include "decon/graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <tuple>

namespace decon {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::PortClash: return "PortClash";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::NodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::BadN: return "BadN";
    case ErrorCode::BadDepth: return "BadDepth";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::EdgeAbsent: return "EdgeAbsent";
    case ErrorCode::InsufficientAgents: return "InsufficientAgents";
    case ErrorCode::CorruptTrace: return "CorruptTrace";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ScheduleError: return "ScheduleError";
  }
  return "Unknown";
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

bool is_connected(std::size_t node_count, std::span<const Edge> edges, const EdgeMask* active) {
  if (node_count <= 1) return true;
  DisjointSets sets(node_count);
  std::size_t components = node_count;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (active && !(*active)[i]) continue;
    if (sets.unite(edges[i].u, edges[i].v) && --components == 1) return true;
  }
  return components == 1;
}

bool is_connected(const Footprint& fp, const EdgeMask& active_edges) {
  return is_connected(fp.node_count(), fp.edges(), &active_edges);
}

Footprint Footprint::build(std::size_t node_count, std::span<const Edge> input) {
  if (node_count == 0) throw Error(ErrorCode::BadN, "footprint needs at least one node");

  std::vector<Edge> edges;
  edges.reserve(input.size());
  for (const Edge& raw : input) {
    if (raw.u >= node_count || raw.v >= node_count) {
      throw Error(ErrorCode::NodeOutOfRange,
                  "edge (" + std::to_string(raw.u) + "," + std::to_string(raw.v) + ")");
    }
    if (raw.u == raw.v) throw Error(ErrorCode::SelfLoop, "at node " + std::to_string(raw.u));
    Edge e = raw;
    if (e.u > e.v) {
      std::swap(e.u, e.v);
      std::swap(e.pu, e.pv);
    }
    edges.push_back(e);
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
      throw Error(ErrorCode::DuplicateEdge, "(" + std::to_string(edges[i].u) + "," +
                                                std::to_string(edges[i].v) + ")");
    }
  }

  std::vector<std::size_t> degree(node_count, 0);
  for (const Edge& e : edges) {
    ++degree[e.u];
    ++degree[e.v];
  }

  Footprint fp;
  fp.adjacency_.resize(node_count);
  std::vector<std::vector<bool>> used(node_count);
  for (NodeId v = 0; v < node_count; ++v) {
    fp.adjacency_[v].resize(degree[v]);
    used[v].assign(degree[v], false);
  }
  auto claim = [&](NodeId v, Port p) {
    if (p >= degree[v]) {
      throw Error(ErrorCode::PortClash, "port " + std::to_string(p) + " at node " +
                                            std::to_string(v) + " exceeds degree " +
                                            std::to_string(degree[v]));
    }
    if (used[v][p]) {
      throw Error(ErrorCode::PortClash,
                  "port " + std::to_string(p) + " used twice at node " + std::to_string(v));
    }
    used[v][p] = true;
  };
  for (EdgeId id = 0; id < edges.size(); ++id) {
    const Edge& e = edges[id];
    claim(e.u, e.pu);
    claim(e.v, e.pv);
    fp.adjacency_[e.u][e.pu] = Incidence{id, e.v, e.pv};
    fp.adjacency_[e.v][e.pv] = Incidence{id, e.u, e.pu};
  }

  if (!is_connected(node_count, edges)) throw Error(ErrorCode::Disconnected, "footprint");
  fp.edges_ = std::move(edges);
  return fp;
}

Footprint Footprint::from_pairs(std::size_t node_count,
                                std::span<const std::pair<NodeId, NodeId>> pairs) {
  std::vector<std::vector<NodeId>> neighbours(node_count);
  for (auto [a, b] : pairs) {
    if (a >= node_count || b >= node_count) {
      throw Error(ErrorCode::NodeOutOfRange,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
    neighbours[a].push_back(b);
    neighbours[b].push_back(a);
  }
  for (auto& list : neighbours) std::sort(list.begin(), list.end());
  auto rank = [&](NodeId at, NodeId of) {
    auto it = std::lower_bound(neighbours[at].begin(), neighbours[at].end(), of);
    return static_cast<Port>(it - neighbours[at].begin());
  };
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [a, b] : pairs) edges.push_back(Edge{a, b, rank(a, b), rank(b, a)});
  return build(node_count, edges);
}

std::size_t Footprint::max_degree() const noexcept {
  std::size_t best = 0;
  for (const auto& row : adjacency_) best = std::max(best, row.size());
  return best;
}

std::optional<EdgeId> Footprint::find_edge(NodeId a, NodeId b) const {
  if (a >= node_count() || b >= node_count()) return std::nullopt;
  for (const Incidence& inc : adjacency_[a]) {
    if (inc.neighbor == b) return inc.edge;
  }
  return std::nullopt;
}

Port Footprint::port_at(EdgeId e, NodeId v) const {
  const Edge& edge = edges_.at(e);
  if (edge.u == v) return edge.pu;
  if (edge.v == v) return edge.pv;
  throw std::out_of_range("node is not an endpoint of edge");
}

NodeId Footprint::other_end(EdgeId e, NodeId v) const {
  const Edge& edge = edges_.at(e);
  if (edge.u == v) return edge.v;
  if (edge.v == v) return edge.u;
  throw std::out_of_range("node is not an endpoint of edge");
}

std::size_t cyclomatic_number(const Footprint& fp) noexcept {
  return fp.edge_count() + 1 - fp.node_count();
}

SpanningDecomposition spanning_decomposition(const Footprint& fp, NodeId root) {
  if (root >= fp.node_count()) throw Error(ErrorCode::NodeOutOfRange, "spanning tree root");
  SpanningDecomposition out;
  out.root = root;
  std::vector<bool> seen(fp.node_count(), false);
  std::vector<bool> in_tree(fp.edge_count(), false);
  std::queue<NodeId> frontier;
  seen[root] = true;
  frontier.push(root);
  while (!frontier.empty()) {
    NodeId v = frontier.front();
    frontier.pop();
    for (const Incidence& inc : fp.ports(v)) {
      if (seen[inc.neighbor]) continue;
      seen[inc.neighbor] = true;
      in_tree[inc.edge] = true;
      frontier.push(inc.neighbor);
    }
  }
  for (EdgeId e = 0; e < fp.edge_count(); ++e) {
    (in_tree[e] ? out.tree_edges : out.feedback_edges).push_back(e);
  }
  return out;
}

std::vector<std::size_t> bfs_distances(const Footprint& fp, NodeId source) {
  constexpr auto unreached = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(fp.node_count(), unreached);
  std::queue<NodeId> frontier;
  dist.at(source) = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    NodeId v = frontier.front();
    frontier.pop();
    for (const Incidence& inc : fp.ports(v)) {
      if (dist[inc.neighbor] != unreached) continue;
      dist[inc.neighbor] = dist[v] + 1;
      frontier.push(inc.neighbor);
    }
  }
  return dist;
}

std::size_t eccentricity(const Footprint& fp, NodeId v) {
  auto dist = bfs_distances(fp, v);
  return *std::max_element(dist.begin(), dist.end());
}

std::size_t diameter(const Footprint& fp) {
  std::size_t best = 0;
  for (NodeId v = 0; v < fp.node_count(); ++v) best = std::max(best, eccentricity(fp, v));
  return best;
}

void write_footprint(std::ostream& out, const Footprint& fp) {
  out << "n " << fp.node_count() << '\n';
  for (const Edge& e : fp.edges()) out << e.u << ' ' << e.v << ' ' << e.pu << ' ' << e.pv << '\n';
}

std::string footprint_to_string(const Footprint& fp) {
  std::ostringstream out;
  write_footprint(out, fp);
  return out.str();
}

Footprint read_footprint(std::istream& in) {
  std::string line;
  std::optional<std::size_t> n;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (!n) {
      std::string tag;
      std::size_t count = 0;
      if (!(fields >> tag >> count) || tag != "n") {
        throw Error(ErrorCode::BadParams, "footprint header must be `n <count>` (line " +
                                              std::to_string(line_no) + ")");
      }
      n = count;
      continue;
    }
    Edge e;
    if (!(fields >> e.u >> e.v >> e.pu >> e.pv)) {
      throw Error(ErrorCode::BadParams, "malformed edge line " + std::to_string(line_no));
    }
    edges.push_back(e);
  }
  if (!n) throw Error(ErrorCode::BadParams, "missing footprint header");
  return Footprint::build(*n, edges);
}

Footprint footprint_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_footprint(in);
}

}  // namespace decon
