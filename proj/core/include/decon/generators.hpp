#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "decon/graph.hpp"

namespace decon {

/// All generators assign ports by ascending neighbour id and throw
/// Error{BadParams} on invalid arguments.

Footprint path_graph(std::size_t n);
Footprint cycle_graph(std::size_t n);
/// Complete binary tree in heap order: children of i are 2i+1 and 2i+2.
Footprint complete_binary_tree(std::size_t depth);
/// Hub 0, rim 1..n-1. n >= 4.
Footprint wheel_graph(std::size_t n);
/// Sides 0..n/2-1 and n/2..n-1. n even, n >= 2.
Footprint complete_bipartite_graph(std::size_t n);
/// Spine of d-2 nodes from node 0, each with a pendant leaf, ending at a hub t
/// joined to every vertex of a k-cycle. Diameter d, cyclomatic number k.
/// Node 0 is the spine end (t itself when d = 2). d >= 2, k >= 3.
Footprint figure4_graph(std::size_t d, std::size_t k);
/// Random recursive spanning tree rooted at 0 plus exactly k extra edges.
Footprint random_connected_graph(std::size_t n, std::size_t k, std::uint64_t seed);

using GeneratorParams = std::map<std::string, std::int64_t>;

/// Dispatch by family name: path, cycle, tree, wheel, complete_bipartite,
/// figure4, random_connected. Keys: n, depth, d, k.
Footprint generate(const std::string& family, const GeneratorParams& params, std::uint64_t seed);

}  // namespace decon
