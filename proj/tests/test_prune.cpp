#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ricci/error.hpp"
#include "ricci/generate.hpp"
#include "ricci/prune.hpp"

using namespace ricci;

namespace {

CurvatureField field_with(std::vector<double> kappa, const std::string& method = "SRC-SPT") {
  CurvatureField f;
  f.method = method;
  f.kappa = std::move(kappa);
  return f;
}

// Two unit-length 10-cycles bridged by one long edge between nodes 0 and 10.
WeightedGraph two_rings_with_bridge(double bridge_len = 4.0) {
  std::vector<EdgeSpec> specs;
  for (int i = 0; i < 10; ++i) specs.push_back({i, (i + 1) % 10, 1.0});
  for (int i = 0; i < 10; ++i) specs.push_back({10 + i, 10 + (i + 1) % 10, 1.0});
  specs.push_back({0, 10, bridge_len});
  return WeightedGraph::build(specs);
}

bool contains(const std::vector<int>& ids, int id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

}  // namespace

TEST_CASE("curvature filter: threshold placement and monotonicity in delta") {
  auto field = field_with({-1.2, -0.4, 0.0, 0.3, 1.0});
  // delta = 0.75 keeps exactly the nonpositive curvatures.
  CHECK(curvature_filter(field, 0.75) == std::vector<int>{0, 1, 2});
  // delta = 0.5 admits everything up to kappa <= 1.
  CHECK(curvature_filter(field, 0.5) == std::vector<int>{0, 1, 2, 3, 4});
  // delta = 1 admits only kappa <= -1.
  CHECK(curvature_filter(field, 1.0) == std::vector<int>{0});
  CHECK_THROWS_AS(curvature_filter(field, -0.1), Error);
  CHECK_THROWS_AS(curvature_filter(field, 1.1), Error);

  for (double lo : {0.5, 0.6, 0.75, 0.9}) {
    double hi = lo + 0.1;
    auto few = curvature_filter(field, hi);
    auto many = curvature_filter(field, lo);
    CHECK(few.size() <= many.size());
    for (int id : few) CHECK(contains(many, id));
  }
}

TEST_CASE("detour test: bridges violate, triangle edges depend on lambda") {
  auto bridge = WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
  CHECK(detour_test(bridge, 1, 0.9));  // removing (1,2) disconnects: infinite detour

  auto tri = WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  // Removing any unit edge leaves a detour of exactly 2.
  CHECK_FALSE(detour_test(tri, 0, 0.01));  // allows detours up to 100
  CHECK(detour_test(tri, 0, 0.6));         // allows only up to 1.67
  CHECK_THROWS_AS(detour_test(tri, 9, 0.5), Error);
  CHECK_THROWS_AS(detour_test(tri, 0, 0.0), Error);
  CHECK_THROWS_AS(detour_test(tri, 0, 1.5), Error);
}

TEST_CASE("two-stage pruning: removes the planted bridge and nothing else") {
  auto g = two_rings_with_bridge();
  int bridge_id = g.edge_between(0, 10);
  REQUIRE(bridge_id >= 0);

  // Hand-built field: strongly negative on the bridge, mildly negative on
  // one edge per ring (curvature candidates that a detour test must clear;
  // one per ring so the joint removal cannot disconnect a ring by itself).
  std::vector<double> kappa(static_cast<std::size_t>(g.edge_count()), 0.2);
  kappa[static_cast<std::size_t>(bridge_id)] = -0.8;
  kappa[static_cast<std::size_t>(g.edge_between(0, 1))] = -0.05;
  kappa[static_cast<std::size_t>(g.edge_between(10, 11))] = -0.1;
  auto field = field_with(kappa);

  std::vector<std::uint8_t> truth(static_cast<std::size_t>(g.edge_count()), 0);
  truth[static_cast<std::size_t>(bridge_id)] = 1;

  auto rep = manl_prune(g, field, 0.75, 0.1, &truth);
  CHECK(rep.method == "SRC-SPT+manl");
  CHECK(rep.candidates.size() == 3);
  CHECK(contains(rep.candidates, bridge_id));
  // Ring edges survive: the detour around their ring is 9, within the
  // lambda = 0.1 allowance of 10. The bridge dies: with it gone the rings
  // are disconnected.
  CHECK(rep.removed == std::vector<int>{bridge_id});
  REQUIRE(rep.tp_rate.has_value());
  REQUIRE(rep.fp_rate.has_value());
  CHECK(*rep.tp_rate == doctest::Approx(1.0));
  CHECK(*rep.fp_rate == doctest::Approx(0.0));
  CHECK(rep.shortcut_count == 1);
  CHECK(rep.edge_count == g.edge_count());
}

TEST_CASE("two-stage pruning: parallel shortcuts cannot vouch for each other") {
  // Nodes 0-1 joined by a long path (length 10) and two parallel-ish long
  // shortcuts 0-2-1 and 0-3-1. Removing one shortcut at a time leaves a
  // cheap detour through the other; removing the candidate set jointly
  // forces the detour onto the long path.
  std::vector<EdgeSpec> specs;
  // unit-length chain 0, 4, 5, ..., 12, 1 of total length 10
  std::vector<int> chain{0, 4, 5, 6, 7, 8, 9, 10, 11, 12, 1};
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    specs.push_back({chain[i], chain[i + 1], 1.0});
  specs.push_back({0, 2, 1.0});
  specs.push_back({2, 1, 1.0});
  specs.push_back({0, 3, 1.0});
  specs.push_back({3, 1, 1.0});
  auto g = WeightedGraph::build(specs);

  std::vector<double> kappa(static_cast<std::size_t>(g.edge_count()), 0.5);
  for (auto [u, v] : {std::pair{0, 2}, {2, 1}, {0, 3}, {3, 1}})
    kappa[static_cast<std::size_t>(g.edge_between(u, v))] = -0.5;
  auto field = field_with(kappa);

  // One at a time, each shortcut hides behind the other: removing (0,2)
  // alone leaves the detour 0-3-1-2 of length 3, within the lambda = 0.2
  // allowance of 5.
  CHECK_FALSE(detour_test(g, g.edge_between(0, 2), 0.2));
  CHECK_FALSE(detour_test(g, g.edge_between(0, 3), 0.2));

  auto rep = manl_prune(g, field, 0.75, 0.2, nullptr);
  // With all four candidates gone, 0-1 distance is 10; every candidate edge
  // has length 1, and 10 > 1 / 0.2 = 5, so all four fall.
  CHECK(rep.removed.size() == 4);
  CHECK(rep.shortcut_count == -1);
  CHECK_FALSE(rep.tp_rate.has_value());
  CHECK_FALSE(rep.fp_rate.has_value());
}

TEST_CASE("two-stage pruning: no candidates, no removals, rates degenerate") {
  auto g = WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  auto field = field_with({0.5, 0.5, 0.5});
  std::vector<std::uint8_t> truth(3, 0);
  auto rep = manl_prune(g, field, 0.75, 0.5, &truth);
  CHECK(rep.candidates.empty());
  CHECK(rep.removed.empty());
  CHECK(rep.shortcut_count == 0);
  CHECK_FALSE(rep.tp_rate.has_value());  // no true shortcuts: rate undefined
  REQUIRE(rep.fp_rate.has_value());
  CHECK(*rep.fp_rate == doctest::Approx(0.0));
}

TEST_CASE("two-stage pruning: removals are always a subset of candidates") {
  std::mt19937_64 rng(321);
  for (int rep_i = 0; rep_i < 10; ++rep_i) {
    int n = 10 + static_cast<int>(rng() % 20);
    auto g = oracles::random_connected_graph(rng, n, n);
    std::vector<double> kappa(static_cast<std::size_t>(g.edge_count()));
    for (double& k : kappa) k = -1.5 + 2.5 * (static_cast<double>(rng() % 1000) / 1000.0);
    auto field = field_with(kappa);
    auto rep = manl_prune(g, field, 0.8, 0.3, nullptr);
    for (int id : rep.removed) CHECK(contains(rep.candidates, id));
    // Relaxing lambda can only shrink the removal set.
    auto strict = manl_prune(g, field, 0.8, 0.9, nullptr);
    for (int id : rep.removed) CHECK(contains(strict.removed, id));
  }
}

TEST_CASE("curvature-only pruning removes every candidate") {
  auto g = two_rings_with_bridge();
  std::vector<double> kappa(static_cast<std::size_t>(g.edge_count()), 0.3);
  kappa[0] = -0.2;
  kappa[5] = -0.9;
  auto rep = curvature_only_prune(g, field_with(kappa), 0.75);
  CHECK(rep.method == "SRC-SPT+curvature-only");
  CHECK(rep.removed == rep.candidates);
  CHECK(rep.removed.size() == 2);
}

TEST_CASE("distance-only pruning cuts above the length quantile") {
  auto g = two_rings_with_bridge(4.0);
  std::vector<std::uint8_t> truth(static_cast<std::size_t>(g.edge_count()), 0);
  truth[static_cast<std::size_t>(g.edge_between(0, 10))] = 1;
  auto rep = distance_only_prune(g, 0.9, &truth);
  CHECK(rep.method == "distance-only");
  REQUIRE(rep.length_quantile.has_value());
  CHECK(*rep.length_quantile == 0.9);
  // Only the bridge (length 4) exceeds the 0.9 quantile of twenty unit
  // lengths plus one long edge.
  CHECK(rep.removed == std::vector<int>{g.edge_between(0, 10)});
  CHECK(*rep.tp_rate == doctest::Approx(1.0));
  CHECK(*rep.fp_rate == doctest::Approx(0.0));
  CHECK_THROWS_AS(distance_only_prune(g, -0.1, nullptr), Error);
  CHECK_THROWS_AS(distance_only_prune(g, 1.0001, nullptr), Error);
}

TEST_CASE("pruning validates field and truth sizes") {
  auto g = WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}});
  auto short_field = field_with({0.0});
  CHECK_THROWS_AS(manl_prune(g, short_field, 0.75, 0.5, nullptr), Error);
  CHECK_THROWS_AS(curvature_only_prune(g, short_field, 0.75, nullptr), Error);
  auto field = field_with({0.0, 0.0});
  std::vector<std::uint8_t> bad_truth(3, 0);
  try {
    manl_prune(g, field, 0.75, 0.5, &bad_truth);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SizeMismatch);
  }
  CHECK_THROWS_AS(manl_prune(g, field, 0.75, 0.0, nullptr), Error);
}

TEST_CASE("end to end: curvature fields flag planted circle shortcuts") {
  // Close concentric circles with cross edges; the curvature field drives
  // the full pipeline and must remove cross edges preferentially.  A
  // Gaussian kernel measure localizes mass along each ring so the fold-back
  // penalty marks cross edges negative while in-ring edges stay clear.
  ManifoldParams params;
  params.noise = 0.02;
  params.r1 = 1.0;
  params.r2 = 1.15;
  auto cloud = manifold(ManifoldKind::ConcentricCircles, 1000, params, 125);
  auto lg = knn_graph_with_labels(cloud, 8);
  int shortcuts = 0;
  for (std::uint8_t f : lg.edge_shortcut) shortcuts += f;
  REQUIRE(shortcuts >= 20);

  TreeSpec tree_spec;
  auto field =
      src_field(lg.graph, tree_spec, MeasureSpec::gaussian(8, 0.05), 1.0, &cloud, 4);
  auto rep = manl_prune(lg.graph, field, 0.75, 0.01, &lg.edge_shortcut, 4);
  REQUIRE(rep.tp_rate.has_value());
  REQUIRE(rep.fp_rate.has_value());
  CHECK(*rep.tp_rate >= 0.9);
  CHECK(*rep.fp_rate <= 0.1);
  CHECK(rep.removed.size() <= rep.candidates.size());
  CHECK(rep.shortcut_count == shortcuts);
}
