#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ricci/error.hpp"
#include "ricci/flow.hpp"
#include "ricci/generate.hpp"

using namespace ricci;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("flow init: a unit cycle keeps unit weights") {
  auto g = WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}});
  auto st = init_flow(g);
  REQUIRE(st.weights.size() == 4);
  for (double w : st.weights) CHECK(w == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(st.t == 0);
}

TEST_CASE("flow init: metrization shortens violating edges, then renormalizes") {
  // Edge (0, 2) of length 5 is undercut by the two-hop path of length 2.
  auto g = WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 5.0}});
  auto st = init_flow(g);
  // metrized lengths {1, 2, 1} in edge order (0,1), (0,2), (1,2) sum to 4;
  // rescaled to sum 3.
  CHECK(st.weights[0] == doctest::Approx(0.75));
  CHECK(st.weights[1] == doctest::Approx(1.5));
  CHECK(st.weights[2] == doctest::Approx(0.75));
  double sum = st.weights[0] + st.weights[1] + st.weights[2];
  CHECK(sum == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("flow init: rejects disconnected graphs") {
  auto g = WeightedGraph::build({{0, 1, 1.0}, {2, 3, 1.0}});
  CHECK_THROWS_AS(init_flow(g), Error);
}

TEST_CASE("flow step: flat curvature is the identity map on weights") {
  std::mt19937_64 rng(606);
  auto g = oracles::random_connected_graph(rng, 24, 16);
  TreeSpec tree;
  auto method = FlowMethod::src(tree, 1.0);
  auto st = init_flow(g);
  auto before = st.weights;
  flow_step(g, st, method, MeasureSpec::make_dirac());
  CHECK(max_abs_diff(before, st.weights) <= 1e-12);
  CHECK(st.t == 1);
  REQUIRE(st.trace.size() == 1);
  CHECK(st.trace[0].max_dkappa == 0.0);
  CHECK(st.trace[0].clamped == 0);
}

TEST_CASE("flow step: single edge at alpha = 0.75 halves, then renormalizes to 1") {
  auto g = WeightedGraph::build({{0, 1, 2.0}});
  auto st = init_flow(g);
  CHECK(st.weights[0] == doctest::Approx(1.0));  // sum normalized to |E| = 1
  TreeSpec tree;
  auto method = FlowMethod::src(tree, 1.0);
  flow_step(g, st, method, MeasureSpec::lazy(0.75));
  REQUIRE(st.kappa.size() == 1);
  CHECK(st.kappa[0] == doctest::Approx(0.5));
  CHECK(st.weights[0] == doctest::Approx(1.0));  // (1 - 1/2) w, rescaled back
  CHECK(st.trace[0].max_dkappa == doctest::Approx(0.5));

  flow_step(g, st, method, MeasureSpec::lazy(0.75));
  CHECK(st.trace[1].max_dkappa == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("flow step: curvature one everywhere collapses the graph") {
  // A single edge with alpha = 0.5 carries identical endpoint measures.
  auto g = WeightedGraph::build({{0, 1, 1.0}});
  auto st = init_flow(g);
  TreeSpec tree;
  try {
    flow_step(g, st, FlowMethod::src(tree, 1.0), MeasureSpec::lazy(0.5));
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::AllEdgesCollapsed);
  }
}

TEST_CASE("flow step: state size must match the graph") {
  auto g = WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}});
  FlowState st;
  st.weights = {1.0};
  TreeSpec tree;
  CHECK_THROWS_AS(flow_step(g, st, FlowMethod::src(tree, 1.0), MeasureSpec::lazy(0.5)), Error);
}

TEST_CASE("flow on trees: closed form and exact baseline walk the same trajectory") {
  std::mt19937_64 rng(432);
  auto g = oracles::random_tree(rng, 30);
  TreeSpec tree;
  auto src_st = init_flow(g);
  auto orc_st = init_flow(g);
  auto spec = MeasureSpec::lazy(0.5);
  for (int t = 0; t < 5; ++t) {
    flow_step(g, src_st, FlowMethod::src(tree, 1.0), spec);
    flow_step(g, orc_st, FlowMethod::orc(), spec);
    CHECK(max_abs_diff(src_st.weights, orc_st.weights) <= 1e-8);
    CHECK(max_abs_diff(src_st.kappa, orc_st.kappa) <= 1e-8);
  }
}

TEST_CASE("flow run: point-mass measures stop after one flat iteration") {
  std::mt19937_64 rng(11011);
  auto g = oracles::random_connected_graph(rng, 30, 20);
  auto init = init_flow(g);
  TreeSpec tree;
  auto st = run_flow(g, FlowMethod::src(tree, 1.0), MeasureSpec::make_dirac(), 20, 1e-4);
  CHECK(st.converged);
  CHECK(st.t == 1);
  REQUIRE(st.trace.size() == 1);
  CHECK(st.trace[0].max_dkappa == 0.0);
  CHECK(max_abs_diff(init.weights, st.weights) <= 1e-12);
}

TEST_CASE("flow run: iteration budget of one is honored") {
  std::mt19937_64 rng(2121);
  auto g = oracles::random_connected_graph(rng, 20, 14);
  TreeSpec tree;
  auto st = run_flow(g, FlowMethod::src(tree, 1.0), MeasureSpec::lazy(0.5), 1, 0.0);
  CHECK(st.t == 1);
  CHECK(st.trace.size() == 1);
  CHECK_FALSE(st.converged);
  CHECK_THROWS_AS(run_flow(g, FlowMethod::src(tree, 1.0), MeasureSpec::lazy(0.5), 0, 1e-4),
                  Error);
}

TEST_CASE("flow run: block-model graph stays positive and traces every step") {
  auto lg = sbm(100, 2, 0.15, 0.1, 7);
  TreeSpec tree;
  auto st = run_flow(lg.graph, FlowMethod::src(tree, 1.0), MeasureSpec::lazy(0.5), 20, 1e-4);
  REQUIRE(static_cast<int>(st.trace.size()) == st.t);
  CHECK(st.t >= 1);
  for (double w : st.weights) CHECK(w > 0.0);
  double sum = 0;
  for (double w : st.weights) sum += w;
  CHECK(sum == doctest::Approx(static_cast<double>(lg.graph.edge_count())).epsilon(1e-9));
  for (const auto& rec : st.trace) {
    CHECK(rec.runtime_ms >= 0.0);
    CHECK(rec.clamped >= 0);
    CHECK(rec.max_dkappa >= 0.0);
  }
  if (st.converged) CHECK(st.trace.back().max_dkappa < 1e-4);
  // Rerunning reproduces the trajectory exactly.
  auto again = run_flow(lg.graph, FlowMethod::src(tree, 1.0), MeasureSpec::lazy(0.5), 20, 1e-4);
  CHECK(again.weights == st.weights);
  CHECK(again.t == st.t);
}

TEST_CASE("similarity transform: exact anchors, monotone, beta validated") {
  std::vector<double> w{0.0, std::log(2.0), 1.0, 2.0};
  auto s = to_similarity(w, 1.0);
  REQUIRE(s.size() == 4);
  CHECK(s[0] == 1.0);
  CHECK(s[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s[2] > s[3]);
  auto sharper = to_similarity(w, 2.0);
  CHECK(sharper[2] == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(to_similarity(w, 0.0), Error);
  CHECK_THROWS_AS(to_similarity(w, -1.0), Error);
}

TEST_CASE("flow method names") {
  TreeSpec tree;
  CHECK(FlowMethod::src(tree, 1.0).name() == "SRC-SPT");
  tree.mode = TreeMode::Mst;
  CHECK(FlowMethod::src(tree, 1.0).name() == "SRC-MST");
  tree.mode = TreeMode::Random;
  CHECK(FlowMethod::src(tree, 1.0).name() == "SRC-RANDOM");
  CHECK(FlowMethod::orc().name() == "ORC");
}
