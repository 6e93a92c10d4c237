#include <gtest/gtest.h>

#include <random>

#include "decon/generators.hpp"
#include "decon/graph.hpp"
#include "support/oracles.hpp"

namespace decon {
namespace {

ErrorCode build_error(std::size_t n, std::vector<Edge> edges) {
  try {
    Footprint::build(n, edges);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "build accepted the edges";
  return ErrorCode::BadParams;
}

TEST(Footprint, RejectsMalformedInput) {
  EXPECT_EQ(build_error(0, {}), ErrorCode::BadN);
  EXPECT_EQ(build_error(2, {{0, 0, 0, 1}}), ErrorCode::SelfLoop);
  EXPECT_EQ(build_error(2, {{0, 2, 0, 0}}), ErrorCode::NodeOutOfRange);
  EXPECT_EQ(build_error(2, {{0, 1, 0, 0}, {1, 0, 1, 1}}), ErrorCode::DuplicateEdge);
  EXPECT_EQ(build_error(3, {{0, 1, 0, 0}, {0, 2, 0, 0}}), ErrorCode::PortClash);
  EXPECT_EQ(build_error(4, {{0, 1, 0, 0}, {2, 3, 0, 0}}), ErrorCode::Disconnected);
}

TEST(Footprint, CanonicalisesEdgeOrder) {
  const Footprint fp = Footprint::build(3, std::vector<Edge>{{2, 1, 0, 1}, {1, 0, 0, 0}});
  ASSERT_EQ(fp.edge_count(), 2u);
  EXPECT_EQ(fp.edge(0), (Edge{0, 1, 0, 0}));
  EXPECT_EQ(fp.edge(1), (Edge{1, 2, 1, 0}));
  EXPECT_EQ(fp.via(1, 1), (Incidence{1, 2, 0}));
  EXPECT_EQ(fp.other_end(1, 2), 1u);
  EXPECT_EQ(fp.port_at(0, 1), 0u);
  EXPECT_EQ(fp.find_edge(2, 1), EdgeId{1});
  EXPECT_FALSE(fp.find_edge(0, 2));
}

TEST(Footprint, PortsAreConsistentBothWays) {
  const Footprint fp = random_connected_graph(15, 9, 4);
  for (NodeId v = 0; v < fp.node_count(); ++v) {
    for (Port p = 0; p < fp.degree(v); ++p) {
      const Incidence& inc = fp.via(v, p);
      const Incidence& back = fp.via(inc.neighbor, inc.remote_port);
      EXPECT_EQ(back.neighbor, v);
      EXPECT_EQ(back.remote_port, p);
      EXPECT_EQ(back.edge, inc.edge);
    }
  }
}

TEST(Footprint, TextRoundTrip) {
  const Footprint fp = wheel_graph(7);
  EXPECT_EQ(footprint_from_string(footprint_to_string(fp)), fp);
  EXPECT_EQ(footprint_from_string("# comment\nn 2\n0 1 0 0\n"), path_graph(2));
}

TEST(GraphMetrics, KnownFamilies) {
  EXPECT_EQ(diameter(path_graph(5)), 4u);
  EXPECT_EQ(diameter(cycle_graph(7)), 3u);
  EXPECT_EQ(diameter(wheel_graph(9)), 2u);
  EXPECT_EQ(diameter(complete_binary_tree(3)), 6u);
  EXPECT_EQ(eccentricity(complete_binary_tree(3), 0), 3u);
  EXPECT_EQ(cyclomatic_number(wheel_graph(9)), 8u);
  EXPECT_EQ(cyclomatic_number(complete_bipartite_graph(8)), 9u);
  EXPECT_EQ(cyclomatic_number(path_graph(6)), 0u);
}

TEST(GraphMetrics, SpanningDecompositionSplitsEdges) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Footprint fp = random_connected_graph(12, seed % 8, seed);
    const auto dec = spanning_decomposition(fp, 0);
    EXPECT_EQ(dec.tree_edges.size(), fp.node_count() - 1);
    EXPECT_EQ(dec.feedback_edges.size(), cyclomatic_number(fp));
    EdgeMask tree(fp.edge_count(), false);
    for (EdgeId e : dec.tree_edges) tree[e] = true;
    EXPECT_TRUE(is_connected(fp, tree));
  }
}

TEST(GraphMetrics, ConnectivityAgreesWithBfs) {
  std::mt19937_64 rng(3);
  const Footprint fp = random_connected_graph(10, 6, 8);
  for (int trial = 0; trial < 200; ++trial) {
    EdgeMask mask(fp.edge_count());
    for (std::size_t e = 0; e < mask.size(); ++e) mask[e] = rng() % 3 != 0;
    std::vector<std::pair<NodeId, NodeId>> kept;
    for (EdgeId e = 0; e < fp.edge_count(); ++e) {
      if (mask[e]) kept.push_back({fp.edge(e).u, fp.edge(e).v});
    }
    bool connected = true;
    try {
      Footprint::from_pairs(fp.node_count(), kept);
    } catch (const Error&) {
      connected = false;
    }
    EXPECT_EQ(is_connected(fp, mask), connected);
  }
}

TEST(Generators, ShapesAndParameters) {
  EXPECT_EQ(figure4_graph(3, 3).node_count(), 6u);
  EXPECT_EQ(diameter(figure4_graph(3, 3)), 3u);
  EXPECT_EQ(cyclomatic_number(figure4_graph(3, 3)), 3u);
  EXPECT_EQ(complete_binary_tree(4).node_count(), 31u);
  EXPECT_EQ(complete_bipartite_graph(6).edge_count(), 9u);
  EXPECT_THROW(complete_bipartite_graph(5), Error);
  for (std::size_t n = 2; n <= 20; ++n) {
    for (std::size_t k = 0; k <= std::min<std::size_t>(n, (n - 1) * (n - 2) / 2); ++k) {
      const Footprint fp = random_connected_graph(n, k, n * 100 + k);
      EXPECT_EQ(fp.node_count(), n);
      EXPECT_EQ(cyclomatic_number(fp), k);
    }
  }
  EXPECT_THROW(random_connected_graph(4, 4, 0), Error);
  EXPECT_EQ(random_connected_graph(12, 5, 9), random_connected_graph(12, 5, 9));
  EXPECT_EQ(generate("wheel", {{"n", 6}}, 0), wheel_graph(6));
  EXPECT_THROW(generate("moebius", {}, 0), Error);
}

TEST(Catalog, MatchesKnownConnectedGraphCounts) {
  const auto catalog = testing::connected_graph_catalog(7);
  const std::size_t expected[] = {0, 1, 1, 2, 6, 21, 112, 853};
  for (std::size_t n = 1; n <= 7; ++n) EXPECT_EQ(catalog[n].size(), expected[n]) << n;
}

}  // namespace
}  // namespace decon
