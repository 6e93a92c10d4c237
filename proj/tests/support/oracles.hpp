#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "decon/contamination.hpp"
#include "decon/graph.hpp"

namespace decon::testing {

/// Adjacency as one bitmask row per vertex; n <= 8.
using Rows = std::vector<std::uint8_t>;

inline std::uint64_t pack(const Rows& rows, const std::vector<int>& perm) {
  const std::size_t n = rows.size();
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      code = (code << 1) | ((rows[perm[i]] >> perm[j]) & 1u);
    }
  }
  return code;
}

/// Smallest packed adjacency over all relabellings that keep the vertices
/// sorted by (degree, sorted neighbour degrees).
inline std::uint64_t canonical_code(const Rows& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<int> deg(n);
  for (int v = 0; v < n; ++v) deg[v] = std::popcount(static_cast<unsigned>(rows[v]));
  std::vector<std::vector<int>> signature(n);
  for (int v = 0; v < n; ++v) {
    signature[v].push_back(deg[v]);
    std::vector<int> nd;
    for (int u = 0; u < n; ++u) {
      if ((rows[v] >> u) & 1u) nd.push_back(deg[u]);
    }
    std::sort(nd.begin(), nd.end());
    signature[v].insert(signature[v].end(), nd.begin(), nd.end());
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return signature[a] < signature[b]; });
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < n;) {
    int j = i;
    while (j < n && signature[order[j]] == signature[order[i]]) ++j;
    cells.push_back({i, j});
    i = j;
  }
  std::uint64_t best = ~std::uint64_t{0};
  auto recurse = [&](auto&& self, std::size_t cell) -> void {
    if (cell == cells.size()) {
      best = std::min(best, pack(rows, order));
      return;
    }
    auto [b, e] = cells[cell];
    std::sort(order.begin() + b, order.begin() + e);
    do {
      self(self, cell + 1);
    } while (std::next_permutation(order.begin() + b, order.begin() + e));
  };
  recurse(recurse, 0);
  return best;
}

/// Every connected simple graph on n vertices up to isomorphism, built by
/// attaching a new vertex to connected graphs on n-1 vertices.
inline std::vector<std::vector<Rows>> connected_graph_catalog(std::size_t max_n) {
  std::vector<std::vector<Rows>> by_n(max_n + 1);
  by_n[1].push_back(Rows{0});
  for (std::size_t n = 2; n <= max_n; ++n) {
    std::set<std::uint64_t> seen;
    for (const Rows& g : by_n[n - 1]) {
      for (unsigned mask = 1; mask < (1u << (n - 1)); ++mask) {
        Rows h = g;
        h.push_back(static_cast<std::uint8_t>(mask));
        for (std::size_t u = 0; u + 1 < n; ++u) {
          if ((mask >> u) & 1u) h[u] |= static_cast<std::uint8_t>(1u << (n - 1));
        }
        if (seen.insert(canonical_code(h)).second) by_n[n].push_back(std::move(h));
      }
    }
  }
  return by_n;
}

inline Footprint to_footprint(const Rows& rows) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId u = 0; u < rows.size(); ++u) {
    for (NodeId v = u + 1; v < rows.size(); ++v) {
      if ((rows[u] >> v) & 1u) pairs.push_back({u, v});
    }
  }
  return Footprint::from_pairs(rows.size(), pairs);
}

/// Recontamination applied one element at a time until nothing changes.
inline ContaminationState brute_force_spread(const Footprint& fp, ContaminationState s, const EdgeMask& present,
                                             const NodeMask& guarded) {
  for (bool changed = true; changed;) {
    changed = false;
    for (EdgeId e = 0; e < fp.edge_count(); ++e) {
      if (!present[e]) continue;
      const Edge& edge = fp.edge(e);
      for (auto [a, b] : {std::pair{edge.u, edge.v}, std::pair{edge.v, edge.u}}) {
        if (!s.edge_contaminated[e] && s.node_contaminated[a]) {
          s.edge_contaminated[e] = true;
          changed = true;
        }
        if (!guarded[b] && !s.node_contaminated[b] && (s.edge_contaminated[e] || s.node_contaminated[a])) {
          s.node_contaminated[b] = true;
          changed = true;
        }
      }
    }
  }
  return s;
}

inline ContaminationState random_state(const Footprint& fp, std::mt19937_64& rng) {
  ContaminationState s = ContaminationState::initial(fp);
  for (std::size_t v = 0; v < s.node_contaminated.size(); ++v) s.node_contaminated[v] = rng() & 1u;
  for (std::size_t e = 0; e < s.edge_contaminated.size(); ++e) s.edge_contaminated[e] = rng() & 1u;
  return s;
}

}  // namespace decon::testing
