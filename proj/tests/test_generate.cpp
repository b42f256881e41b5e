#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "ricci/error.hpp"
#include "ricci/generate.hpp"

using namespace ricci;

namespace {

constexpr double kPi = 3.14159265358979323846;

double mean_degree(const WeightedGraph& g) {
  return 2.0 * g.edge_count() / g.node_count();
}

}  // namespace

TEST_CASE("block model: mean degree tracks the expected value at low mixing") {
  // Two blocks of 250 at p_intra = 0.15, rho = 0.1: expected degree
  // 249 * 0.15 + 250 * 0.015 = 41.1.
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto lg = sbm(500, 2, 0.15, 0.1, seed);
    CHECK(lg.graph.node_count() == 500);
    CHECK(std::abs(mean_degree(lg.graph) - 41.1) <= 4.0);
    CHECK(lg.graph.connected());
  }
}

TEST_CASE("block model: edge count tracks the expected value at rho = 0.5") {
  // E[m] = C(250,2) * 2 * 0.15 + 250^2 * 0.075 = 14025.
  auto lg = sbm(500, 2, 0.15, 0.5, 99);
  CHECK(std::abs(lg.graph.edge_count() - 14025.0) <= 0.05 * 14025.0);
}

TEST_CASE("block model: unit lengths and contiguous block labels") {
  auto lg = sbm(60, 3, 0.4, 0.1, 5);
  for (const Edge& e : lg.graph.edges()) CHECK(e.length == 1.0);
  REQUIRE(lg.node_label.size() == 60);
  for (int v = 0; v < 60; ++v) CHECK(lg.node_label[static_cast<std::size_t>(v)] == v / 20);
  CHECK(lg.edge_shortcut.empty());
}

TEST_CASE("block model: same seed, same graph; different seed, different graph") {
  auto a = sbm(80, 2, 0.3, 0.2, 1234);
  auto b = sbm(80, 2, 0.3, 0.2, 1234);
  REQUIRE(a.graph.edge_count() == b.graph.edge_count());
  for (int id = 0; id < a.graph.edge_count(); ++id) {
    CHECK(a.graph.edge(id).u == b.graph.edge(id).u);
    CHECK(a.graph.edge(id).v == b.graph.edge(id).v);
  }
  auto c = sbm(80, 2, 0.3, 0.2, 4321);
  bool identical = a.graph.edge_count() == c.graph.edge_count();
  for (int id = 0; identical && id < a.graph.edge_count(); ++id)
    identical = a.graph.edge(id).u == c.graph.edge(id).u &&
                a.graph.edge(id).v == c.graph.edge(id).v;
  CHECK_FALSE(identical);
}

TEST_CASE("block model: parameter validation") {
  CHECK_THROWS_AS(sbm(10, 3, 0.5, 0.1, 1), Error);   // n not a multiple of k
  CHECK_THROWS_AS(sbm(10, 0, 0.5, 0.1, 1), Error);   // no blocks
  CHECK_THROWS_AS(sbm(0, 1, 0.5, 0.1, 1), Error);    // no nodes
  CHECK_THROWS_AS(sbm(10, 2, 0.0, 0.1, 1), Error);   // p_intra = 0
  CHECK_THROWS_AS(sbm(10, 2, 1.5, 0.1, 1), Error);   // p_intra > 1
  CHECK_THROWS_AS(sbm(10, 2, 0.5, -0.1, 1), Error);  // negative mixing
  CHECK_THROWS_AS(sbm(10, 2, 0.8, 1.5, 1), Error);   // rho * p_intra > 1
}

TEST_CASE("block model: hopelessly sparse settings raise after bounded retries") {
  try {
    sbm(10, 2, 0.001, 0.0, 77);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CannotConnect);
  }
}

TEST_CASE("manifolds: noiseless circles have exact radii, halves and angles") {
  ManifoldParams params;
  params.noise = 0.0;
  params.r1 = 1.0;
  params.r2 = 2.5;
  auto cloud = manifold(ManifoldKind::ConcentricCircles, 80, params, 3);
  REQUIRE(cloud.size() == 80);
  REQUIRE(cloud.dim() == 2);
  CHECK(cloud.kind == "concentric_circles");
  CHECK(cloud.component_count() == 2);
  for (int i = 0; i < 80; ++i) {
    double r = cloud.points.row(i).norm();
    int comp = cloud.component[static_cast<std::size_t>(i)];
    CHECK(comp == (i < 40 ? 0 : 1));
    CHECK(r == doctest::Approx(comp == 0 ? 1.0 : 2.5).epsilon(1e-12));
    double theta = cloud.param[static_cast<std::size_t>(i)];
    CHECK(cloud.points(i, 0) == doctest::Approx(r * std::cos(theta)).epsilon(1e-12));
    CHECK(cloud.chart(i, 0) == doctest::Approx(r * theta).epsilon(1e-12));
    CHECK(cloud.chart(i, 1) == 0.0);
  }
}

TEST_CASE("manifolds: noiseless swiss roll evaluates the spiral exactly") {
  ManifoldParams params;
  params.noise = 0.0;
  auto cloud = manifold(ManifoldKind::SwissRoll3d, 120, params, 11);
  REQUIRE(cloud.dim() == 3);
  for (int i = 0; i < 120; ++i) {
    double t = cloud.param[static_cast<std::size_t>(i)];
    CHECK(t >= 1.5 * kPi - 1e-12);
    CHECK(t <= 4.5 * kPi + 1e-12);
    CHECK(cloud.points(i, 0) == doctest::Approx(t * std::cos(t)).epsilon(1e-12));
    CHECK(cloud.points(i, 2) == doctest::Approx(t * std::sin(t)).epsilon(1e-12));
    CHECK(cloud.points(i, 1) >= 0.0);
    CHECK(cloud.points(i, 1) <= 21.0);
    CHECK(cloud.chart(i, 1) == cloud.points(i, 1));
  }
  // Unrolled arc length grows with the spiral parameter.
  std::vector<int> order(120);
  for (int i = 0; i < 120; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return cloud.param[static_cast<std::size_t>(a)] < cloud.param[static_cast<std::size_t>(b)];
  });
  for (int i = 1; i < 120; ++i)
    CHECK(cloud.chart(order[static_cast<std::size_t>(i)], 0) >=
          cloud.chart(order[static_cast<std::size_t>(i - 1)], 0));
}

TEST_CASE("manifolds: noiseless s-curve and moons satisfy their defining equations") {
  ManifoldParams params;
  params.noise = 0.0;
  auto s = manifold(ManifoldKind::SCurve, 70, params, 21);
  REQUIRE(s.dim() == 3);
  CHECK(s.component_count() == 1);
  for (int i = 0; i < 70; ++i) {
    double t = s.param[static_cast<std::size_t>(i)];
    CHECK(std::abs(t) <= 1.5 * kPi + 1e-12);
    CHECK(s.points(i, 0) == doctest::Approx(std::sin(t)).epsilon(1e-12));
    double sign = t >= 0 ? 1.0 : -1.0;
    CHECK(s.points(i, 2) == doctest::Approx(sign * (std::cos(t) - 1.0)).epsilon(1e-12));
    CHECK(s.chart(i, 0) == t);
  }

  auto m = manifold(ManifoldKind::Moons, 64, params, 22);
  REQUIRE(m.dim() == 2);
  CHECK(m.component_count() == 2);
  for (int i = 0; i < 64; ++i) {
    double t = m.param[static_cast<std::size_t>(i)];
    if (m.component[static_cast<std::size_t>(i)] == 0) {
      CHECK(m.points.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(m.points(i, 1) >= -1e-12);
    } else {
      double dx = m.points(i, 0) - 1.0;
      double dy = m.points(i, 1) - 0.5;
      CHECK(std::sqrt(dx * dx + dy * dy) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(m.points(i, 1) <= 0.5 + 1e-12);
    }
    CHECK(m.chart(i, 0) == t);
  }
}

TEST_CASE("manifolds: same seed gives bit-identical clouds") {
  ManifoldParams params;
  params.noise = 0.07;
  auto a = manifold(ManifoldKind::Moons, 50, params, 8);
  auto b = manifold(ManifoldKind::Moons, 50, params, 8);
  bool points_identical = (a.points.array() == b.points.array()).all();
  bool chart_identical = (a.chart.array() == b.chart.array()).all();
  CHECK(points_identical);
  CHECK(chart_identical);
  CHECK(a.param == b.param);
  auto c = manifold(ManifoldKind::Moons, 50, params, 9);
  bool reseeded_differs = !(a.points.array() == c.points.array()).all();
  CHECK(reseeded_differs);
}

TEST_CASE("manifolds: validation and kind names") {
  ManifoldParams params;
  CHECK_THROWS_AS(manifold(ManifoldKind::Moons, 1, params, 1), Error);
  params.noise = -0.1;
  CHECK_THROWS_AS(manifold(ManifoldKind::Moons, 10, params, 1), Error);
  params.noise = 0.0;
  params.r2 = 0.5;  // r2 < r1
  CHECK_THROWS_AS(manifold(ManifoldKind::ConcentricCircles, 10, params, 1), Error);

  CHECK(manifold_kind_from_name("concentric_circles") == ManifoldKind::ConcentricCircles);
  CHECK(manifold_kind_from_name("moons") == ManifoldKind::Moons);
  CHECK(manifold_kind_from_name("s_curve") == ManifoldKind::SCurve);
  CHECK(manifold_kind_from_name("swiss_roll_3d") == ManifoldKind::SwissRoll3d);
  CHECK_THROWS_AS(manifold_kind_from_name("klein_bottle"), Error);
  CHECK(manifold_kind_name(ManifoldKind::SCurve) == "s_curve");
}

TEST_CASE("knn graph: edge lengths are the ambient distances, k bounds enforced") {
  ManifoldParams params;
  params.noise = 0.02;
  auto cloud = manifold(ManifoldKind::Moons, 60, params, 31);
  auto lg = knn_graph_with_labels(cloud, 4);
  CHECK(lg.graph.node_count() == 60);
  CHECK(lg.node_label == cloud.component);
  REQUIRE(lg.edge_shortcut.size() == static_cast<std::size_t>(lg.graph.edge_count()));
  for (const Edge& e : lg.graph.edges()) {
    CHECK(e.length == doctest::Approx(lp_distance(cloud, e.u, e.v, 2.0)).epsilon(1e-15));
    CHECK(e.u != e.v);
  }
  // Every node keeps at least its own k neighbors.
  for (NodeId v = 0; v < 60; ++v) CHECK(lg.graph.degree(v) >= 4);
  CHECK_THROWS_AS(knn_graph_with_labels(cloud, 1), Error);
  CHECK_THROWS_AS(knn_graph_with_labels(cloud, 60), Error);
}

TEST_CASE("knn graph: well-separated circles produce no shortcuts") {
  // Dense enough that the k nearest of every point stay on its own circle.
  ManifoldParams params;
  params.noise = 0.005;
  params.r1 = 1.0;
  params.r2 = 3.0;
  auto cloud = manifold(ManifoldKind::ConcentricCircles, 300, params, 41);
  auto lg = knn_graph_with_labels(cloud, 4);
  int flagged = 0;
  for (std::uint8_t f : lg.edge_shortcut) flagged += f;
  CHECK(flagged == 0);
}

TEST_CASE("knn graph: close circles produce cross-component edges, all flagged") {
  ManifoldParams params;
  params.noise = 0.05;
  params.r1 = 1.0;
  params.r2 = 1.12;
  auto cloud = manifold(ManifoldKind::ConcentricCircles, 150, params, 51);
  auto lg = knn_graph_with_labels(cloud, 8);
  int flagged = 0;
  for (int id = 0; id < lg.graph.edge_count(); ++id) {
    const Edge& e = lg.graph.edge(id);
    bool crosses = cloud.component[static_cast<std::size_t>(e.u)] !=
                   cloud.component[static_cast<std::size_t>(e.v)];
    CHECK(static_cast<bool>(lg.edge_shortcut[static_cast<std::size_t>(id)]) == crosses);
    flagged += lg.edge_shortcut[static_cast<std::size_t>(id)];
  }
  CHECK(flagged > 0);
}

TEST_CASE("knn graph: single-chart clouds flag edges by chart-to-ambient ratio") {
  // A folded strip: ambient positions bring the two ends close together,
  // while the chart keeps them far apart.
  int n = 20;
  PointCloud cloud;
  cloud.points.resize(n, 2);
  cloud.chart.resize(n, 2);
  cloud.param.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    // Positions walk 0, 1, ..., 9 then fold back 9.25, 8.25, ...
    double x = i < n / 2 ? i : (n - 1 - i) + 0.25;
    double y = i < n / 2 ? 0.0 : 0.4;
    cloud.points(i, 0) = x;
    cloud.points(i, 1) = y;
    cloud.chart(i, 0) = i;  // intrinsic position never folds
    cloud.chart(i, 1) = 0.0;
  }
  auto lg = knn_graph_with_labels(cloud, 2, ShortcutRule{3.0});
  REQUIRE(lg.graph.edge_count() > 0);
  int flagged = 0;
  for (int id = 0; id < lg.graph.edge_count(); ++id) {
    const Edge& e = lg.graph.edge(id);
    bool expect = chart_distance(cloud, e.u, e.v) > 3.0 * e.length;
    CHECK(static_cast<bool>(lg.edge_shortcut[static_cast<std::size_t>(id)]) == expect);
    flagged += lg.edge_shortcut[static_cast<std::size_t>(id)];
  }
  CHECK(flagged > 0);  // the fold must be caught
  // A permissive ratio keeps every edge.
  auto relaxed = knn_graph_with_labels(cloud, 2, ShortcutRule{1e6});
  for (std::uint8_t f : relaxed.edge_shortcut) CHECK(f == 0);
}

TEST_CASE("knn graph: bare clouds carry no shortcut annotations") {
  PointCloud cloud;
  cloud.points.resize(5, 2);
  for (int i = 0; i < 5; ++i) {
    cloud.points(i, 0) = i;
    cloud.points(i, 1) = 0.5 * i * i;
  }
  auto lg = knn_graph_with_labels(cloud, 2);
  CHECK(lg.edge_shortcut.empty());
  CHECK(lg.node_label.empty());
}

TEST_CASE("knn graph: coincident points are rejected") {
  PointCloud cloud;
  cloud.points.resize(3, 2);
  cloud.points << 0.0, 0.0, 0.0, 0.0, 1.0, 1.0;
  CHECK_THROWS_AS(knn_graph_with_labels(cloud, 2), Error);
}
