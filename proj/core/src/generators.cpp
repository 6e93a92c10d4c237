#include "decon/generators.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "rng_util.hpp"

namespace decon {

namespace {

using Pairs = std::vector<std::pair<NodeId, NodeId>>;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::BadParams, what); }

Footprint make(std::size_t n, const Pairs& pairs) { return Footprint::from_pairs(n, pairs); }

std::size_t param(const GeneratorParams& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) bad("missing generator parameter '" + key + "'");
  if (it->second < 0) bad("negative generator parameter '" + key + "'");
  return static_cast<std::size_t>(it->second);
}

}  // namespace

Footprint path_graph(std::size_t n) {
  if (n < 1) bad("path needs n >= 1");
  Pairs pairs;
  for (NodeId v = 1; v < n; ++v) pairs.emplace_back(v - 1, v);
  return make(n, pairs);
}

Footprint cycle_graph(std::size_t n) {
  if (n < 3) bad("cycle needs n >= 3");
  Pairs pairs;
  for (NodeId v = 1; v < n; ++v) pairs.emplace_back(v - 1, v);
  pairs.emplace_back(0, static_cast<NodeId>(n - 1));
  return make(n, pairs);
}

Footprint complete_binary_tree(std::size_t depth) {
  if (depth > 20) bad("tree depth too large");
  const std::size_t n = (std::size_t{1} << (depth + 1)) - 1;
  Pairs pairs;
  for (NodeId v = 1; v < n; ++v) pairs.emplace_back((v - 1) / 2, v);
  return make(n, pairs);
}

Footprint wheel_graph(std::size_t n) {
  if (n < 4) bad("wheel needs n >= 4");
  Pairs pairs;
  for (NodeId v = 1; v < n; ++v) {
    pairs.emplace_back(0, v);
    pairs.emplace_back(v, v + 1 < n ? v + 1 : 1);
  }
  return make(n, pairs);
}

Footprint complete_bipartite_graph(std::size_t n) {
  if (n < 2 || n % 2 != 0) bad("complete_bipartite needs even n >= 2");
  const auto half = static_cast<NodeId>(n / 2);
  Pairs pairs;
  for (NodeId a = 0; a < half; ++a) {
    for (NodeId b = half; b < n; ++b) pairs.emplace_back(a, b);
  }
  return make(n, pairs);
}

Footprint figure4_graph(std::size_t d, std::size_t k) {
  if (d < 2 || k < 3) bad("figure4 needs d >= 2 and k >= 3");
  const std::size_t spine = d - 2;
  const std::size_t n = 2 * spine + k + 1;
  // Ids: spine 0..spine-1, cycle, hub t, then one leaf per spine node.
  // With no spine the hub takes id 0 and the cycle follows it.
  const NodeId t = spine == 0 ? 0 : static_cast<NodeId>(spine + k);
  const NodeId first_c = spine == 0 ? 1 : static_cast<NodeId>(spine);
  Pairs pairs;
  for (NodeId s = 0; s + 1 < spine; ++s) pairs.emplace_back(s, s + 1);
  if (spine > 0) pairs.emplace_back(static_cast<NodeId>(spine - 1), t);
  for (NodeId i = 0; i < k; ++i) {
    const NodeId c = first_c + i;
    pairs.emplace_back(t, c);
    pairs.emplace_back(c, first_c + static_cast<NodeId>((i + 1) % k));
  }
  for (NodeId s = 0; s < spine; ++s) pairs.emplace_back(s, static_cast<NodeId>(spine + k + 1 + s));
  return make(n, pairs);
}

Footprint random_connected_graph(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (n < 1) bad("random_connected needs n >= 1");
  const std::size_t max_extra = n * (n - 1) / 2 - (n - 1);
  if (k > max_extra) bad("random_connected: k exceeds the number of non-tree pairs");
  std::mt19937_64 rng(seed);
  Pairs pairs;
  std::set<std::pair<NodeId, NodeId>> used;
  for (NodeId v = 1; v < n; ++v) {
    const auto parent = static_cast<NodeId>(detail::uniform_below(rng, v));
    pairs.emplace_back(parent, v);
    used.emplace(parent, v);
  }
  Pairs candidates;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (!used.count({u, v})) candidates.emplace_back(u, v);
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(candidates[i], candidates[i + detail::uniform_below(rng, candidates.size() - i)]);
    pairs.push_back(candidates[i]);
  }
  return make(n, pairs);
}

Footprint generate(const std::string& family, const GeneratorParams& params, std::uint64_t seed) {
  if (family == "path") return path_graph(param(params, "n"));
  if (family == "cycle") return cycle_graph(param(params, "n"));
  if (family == "tree") return complete_binary_tree(param(params, "depth"));
  if (family == "wheel") return wheel_graph(param(params, "n"));
  if (family == "complete_bipartite") return complete_bipartite_graph(param(params, "n"));
  if (family == "figure4") return figure4_graph(param(params, "d"), param(params, "k"));
  if (family == "random_connected") {
    return random_connected_graph(param(params, "n"), param(params, "k"), seed);
  }
  bad("unknown graph family '" + family + "'");
}

}  // namespace decon
