#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ricci/error.hpp"
#include "ricci/graph.hpp"

using namespace ricci;

namespace {

WeightedGraph unit_cycle4() {
  return WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}});
}

WeightedGraph unit_path3() { return WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}}); }

std::vector<EdgeSpec> specs_of(const WeightedGraph& g) {
  std::vector<EdgeSpec> specs;
  for (const Edge& e : g.edges()) specs.push_back({e.u, e.v, e.length});
  return specs;
}

double total_of(const WeightedGraph& g, const std::vector<int>& ids) {
  double total = 0;
  for (int id : ids) total += g.length(id);
  return total;
}

}  // namespace

TEST_CASE("build: minimal two-node graph is connected") {
  auto g = WeightedGraph::build({{0, 1, 1.0}});
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.connected());
}

TEST_CASE("build: two separate edges give a disconnected graph") {
  auto g = WeightedGraph::build({{0, 1, 1.0}, {2, 3, 1.0}});
  CHECK(g.node_count() == 4);
  CHECK_FALSE(g.connected());
}

TEST_CASE("build: rejects bad edges") {
  CHECK_THROWS_AS(WeightedGraph::build({{0, 1, -1.0}}), Error);
  CHECK_THROWS_AS(WeightedGraph::build({{0, 1, 0.0}}), Error);
  CHECK_THROWS_AS(WeightedGraph::build({{2, 2, 1.0}}), Error);
  CHECK_THROWS_AS(WeightedGraph::build({{0, 1, 1.0}, {1, 0, 2.0}}), Error);
  CHECK_THROWS_AS(WeightedGraph::build(3, {{0, 5, 1.0}}), Error);

  try {
    WeightedGraph::build({{0, 1, -1.0}});
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPositiveLength);
  }
  try {
    WeightedGraph::build({{0, 1, 1.0}, {1, 0, 2.0}});
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DuplicateEdge);
  }
}

TEST_CASE("build: edges are canonically ordered and adjacency is sorted") {
  auto g = WeightedGraph::build({{3, 1, 2.0}, {0, 2, 1.0}, {1, 0, 4.0}});
  CHECK(g.edges()[0].u == 0);
  CHECK(g.edges()[0].v == 1);
  CHECK(g.edges()[1].v == 2);
  CHECK(g.edges()[2].u == 1);
  CHECK(g.edges()[2].v == 3);
  CHECK(g.edge_between(1, 3) == 2);
  CHECK(g.edge_between(3, 1) == 2);
  CHECK(g.edge_between(0, 3) == -1);
  for (NodeId v = 0; v < g.node_count(); ++v)
    CHECK(std::is_sorted(
        g.neighbors(v).begin(), g.neighbors(v).end(),
        [](const WeightedGraph::Neighbor& a, const WeightedGraph::Neighbor& b) {
          return a.node < b.node;
        }));
}

TEST_CASE("dijkstra: unit path") {
  auto res = dijkstra(unit_path3(), 0);
  CHECK(res.metric.dist[2] == doctest::Approx(2.0));
  CHECK(res.tree.parent(1) == 0);
  CHECK(res.tree.parent(2) == 1);
}

TEST_CASE("dijkstra: equal-distance predecessor resolves to the smallest id") {
  auto res = dijkstra(unit_cycle4(), 0);
  CHECK(res.metric.dist[2] == doctest::Approx(2.0));
  // Node 2 is reachable at distance 2 through 1 or through 3.
  CHECK(res.tree.parent(2) == 1);
}

TEST_CASE("dijkstra: single node") {
  auto g = WeightedGraph::build(1, {});
  auto res = dijkstra(g, 0);
  CHECK(res.metric.dist[0] == 0.0);
  CHECK(res.tree.edge_set().empty());
}

TEST_CASE("dijkstra: throws on disconnected input") {
  auto g = WeightedGraph::build({{0, 1, 1.0}, {2, 3, 1.0}});
  CHECK_THROWS_AS(dijkstra(g, 0), Error);
}

TEST_CASE("dijkstra distances match Bellman-Ford on random graphs") {
  std::mt19937_64 rng(20240601);
  for (int rep = 0; rep < 30; ++rep) {
    int n = 2 + static_cast<int>(rng() % 127);
    auto g = oracles::random_connected_graph(rng, n, n / 2);
    auto src = static_cast<NodeId>(rng() % static_cast<std::uint64_t>(n));
    auto fast = dijkstra_distances(g, src);
    auto slow = oracles::bellman_ford(g, src);
    for (NodeId v = 0; v < n; ++v) CHECK(fast.dist[v] == doctest::Approx(slow[v]).epsilon(1e-12));
  }
}

TEST_CASE("kruskal: triangle keeps the two shortest edges") {
  auto g = WeightedGraph::build({{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}});
  auto mst = kruskal_mst(g);
  REQUIRE(mst.size() == 2);
  CHECK(total_of(g, mst) == doctest::Approx(3.0));
}

TEST_CASE("kruskal: unit 4-cycle drops edge (2,3) under the stable tie-break") {
  auto g = unit_cycle4();
  auto mst = kruskal_mst(g);
  REQUIRE(mst.size() == 3);
  for (int id : mst) CHECK_FALSE((g.edge(id).u == 2 && g.edge(id).v == 3));
}

TEST_CASE("kruskal: a tree is its own minimum spanning tree") {
  std::mt19937_64 rng(7);
  auto g = oracles::random_tree(rng, 40);
  auto mst = kruskal_mst(g);
  REQUIRE(static_cast<int>(mst.size()) == g.edge_count());
  std::vector<int> sorted = mst;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < g.edge_count(); ++i) CHECK(sorted[i] == i);
}

TEST_CASE("kruskal: throws on disconnected input") {
  auto g = WeightedGraph::build({{0, 1, 1.0}, {2, 3, 1.0}});
  CHECK_THROWS_AS(kruskal_mst(g), Error);
}

TEST_CASE("root_tree: subtree sets on a path rooted at one end") {
  auto tree = root_tree(3, specs_of(unit_path3()), 0);
  CHECK(tree.in_subtree(1, 1));
  CHECK(tree.in_subtree(1, 2));  // subtree below 1 holds {1, 2}
  CHECK_FALSE(tree.in_subtree(1, 0));
  CHECK(tree.in_subtree(2, 2));
  CHECK_FALSE(tree.in_subtree(2, 1));
}

TEST_CASE("root_tree: star subtrees are single leaves") {
  auto tree = root_tree(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}, 0);
  for (NodeId leaf = 1; leaf <= 3; ++leaf)
    for (NodeId v = 0; v <= 3; ++v) CHECK(tree.in_subtree(leaf, v) == (v == leaf));
}

TEST_CASE("root_tree: path rooted at the middle splits into two singletons") {
  auto tree = root_tree(3, specs_of(unit_path3()), 1);
  CHECK(tree.in_subtree(0, 0));
  CHECK_FALSE(tree.in_subtree(0, 2));
  CHECK(tree.in_subtree(2, 2));
  CHECK_FALSE(tree.in_subtree(2, 0));
}

TEST_CASE("root_tree: rejects cycles and non-spanning edge sets") {
  CHECK_THROWS_AS(root_tree(4, specs_of(unit_cycle4()), 0), Error);
  CHECK_THROWS_AS(root_tree(3, {{0, 1, 1.0}}, 0), Error);  // node 2 unreachable
}

TEST_CASE("tree path length: path ends, identical nodes, SPT branches") {
  auto tree = root_tree(3, specs_of(unit_path3()), 0);
  CHECK(tree.path_length(0, 2) == doctest::Approx(2.0));
  CHECK(tree.path_length(1, 1) == 0.0);

  auto spt = dijkstra(unit_cycle4(), 0).tree;
  // 2 hangs below 1 while 3 hangs below 0, so the tree detour is 3 hops.
  CHECK(spt.path_length(2, 3) == doctest::Approx(3.0));
  CHECK_THROWS_AS(spt.path_length(0, 9), Error);
}

TEST_CASE("random spanning tree: reproducible, spanning, fixed point on trees") {
  std::mt19937_64 rng(11);
  auto tree_g = oracles::random_tree(rng, 25);
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    auto ids = random_spanning_tree(tree_g, seed);
    REQUIRE(static_cast<int>(ids.size()) == tree_g.edge_count());
    std::sort(ids.begin(), ids.end());
    for (int i = 0; i < tree_g.edge_count(); ++i) CHECK(ids[i] == i);
  }

  auto cyc = unit_cycle4();
  auto a = random_spanning_tree(cyc, 1);
  auto b = random_spanning_tree(cyc, 1);
  REQUIRE(a.size() == 3);
  CHECK(a == b);
  // A rooted tree must come out of it.
  auto rooted = root_tree_from_ids(cyc, a, 0);
  CHECK(rooted.node_count() == 4);
}

TEST_CASE("MST total length never exceeds random spanning trees") {
  std::mt19937_64 rng(5150);
  auto g = oracles::random_connected_graph(rng, 30, 40);
  double mst_total = total_of(g, kruskal_mst(g));
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    CHECK(mst_total <= total_of(g, random_spanning_tree(g, seed)) + 1e-9);
}

TEST_CASE("DFS-interval membership matches flood-fill membership exhaustively") {
  std::mt19937_64 rng(424242);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 2 + static_cast<int>(rng() % 63);
    auto g = oracles::random_tree(rng, n);
    auto root = static_cast<NodeId>(rng() % static_cast<std::uint64_t>(n));
    auto tree = root_tree(n, specs_of(g), root);
    for (NodeId c = 0; c < n; ++c) {
      if (c == tree.root()) continue;
      auto slow = oracles::subtree_by_flood_fill(tree, c);
      for (NodeId v = 0; v < n; ++v) CHECK(tree.in_subtree(c, v) == static_cast<bool>(slow[v]));
    }
  }
}

TEST_CASE("with_lengths replaces lengths and validates them") {
  auto g = unit_path3();
  std::vector<double> two{2.0, 3.0};
  auto h = g.with_lengths(two);
  CHECK(h.edges()[0].length == 2.0);
  CHECK(h.edges()[1].length == 3.0);
  std::vector<double> short_list{1.0};
  CHECK_THROWS_AS(g.with_lengths(short_list), Error);
  std::vector<double> with_zero{1.0, 0.0};
  CHECK_THROWS_AS(g.with_lengths(with_zero), Error);
}

TEST_CASE("without_edges removes the masked edges") {
  auto g = unit_cycle4();
  std::vector<std::uint8_t> mask{1, 0, 0, 0};
  auto h = g.without_edges(mask);
  CHECK(h.edge_count() == 3);
  CHECK(h.node_count() == 4);
  CHECK(h.edge_between(0, 1) == -1);
}

TEST_CASE("masked shortest path: detours and unreachability") {
  auto tri = WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  std::vector<std::uint8_t> drop_01(3, 0);
  drop_01[static_cast<std::size_t>(tri.edge_between(0, 1))] = 1;
  CHECK(shortest_path_avoiding(tri, 0, 1, drop_01) == doctest::Approx(2.0));

  auto bridge = WeightedGraph::build({{0, 1, 1.0}});
  std::vector<std::uint8_t> drop_all{1};
  CHECK(shortest_path_avoiding(bridge, 0, 1, drop_all) == oracles::kInf);
}

TEST_CASE("SPT realizes shortest-path distances along tree paths from the root") {
  std::mt19937_64 rng(909);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 2 + static_cast<int>(rng() % 60);
    auto g = oracles::random_connected_graph(rng, n, n);
    auto res = dijkstra(g, 0);
    for (NodeId v = 0; v < n; ++v)
      CHECK(res.tree.path_length(0, v) == doctest::Approx(res.metric.dist[v]).epsilon(1e-12));
  }
}
