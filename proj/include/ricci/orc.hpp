#pragma once

#include <vector>

#include "ricci/graph.hpp"
#include "ricci/measure.hpp"
#include "ricci/sobolev.hpp"

namespace ricci {

/// Balanced transportation instance. Costs are row-major
/// |supply| x |demand|, finite and nonnegative; total supply and demand
/// must agree within 1e-9.
struct TransportProblem {
  std::vector<double> supply;
  std::vector<double> demand;
  std::vector<double> cost;

  int rows() const { return static_cast<int>(supply.size()); }
  int cols() const { return static_cast<int>(demand.size()); }
  double cost_at(int i, int j) const {
    return cost[static_cast<std::size_t>(i) * demand.size() + static_cast<std::size_t>(j)];
  }
};

struct TransportPlan {
  double objective = 0;
  std::vector<double> flow;      // row-major, same shape as cost
  std::vector<double> row_dual;  // u
  std::vector<double> col_dual;  // v
};

/// Exact minimum-cost transport via the transportation simplex
/// (northwest-corner start, steepest entering rule with a Bland fallback
/// against degenerate cycling). Before returning, the plan is certified:
/// feasibility, nonnegative reduced costs against the recovered duals,
/// complementary slackness, and primal/dual objective agreement, all at
/// 1e-9 (relative to the cost scale). Certificate failure throws.
TransportPlan solve_transport(const TransportProblem& tp);

/// Optimal objective only.
double exact_w1(const TransportProblem& tp);

/// Shortest-path rows from every node (one Dijkstra per source; sources
/// are processed in parallel when threads > 1, each writing its own row).
std::vector<std::vector<double>> all_pairs_distances(const WeightedGraph& g, int threads = 1);

/// W1 between two node measures under the shortest-path ground metric
/// given by precomputed rows.
double exact_w1(const std::vector<std::vector<double>>& metric_rows, const DiscreteMeasure& mu,
                const DiscreteMeasure& nu);

/// kappa(x, y) = 1 - W1(mu_x, mu_y) / d(x, y) with d the shortest-path
/// metric. Self-contained: runs the Dijkstras it needs.
double orc_edge(const WeightedGraph& g, const DiscreteMeasure& mu_x, const DiscreteMeasure& mu_y,
                NodeId x, NodeId y);

/// Curvature of every edge. Ground-metric rows are computed once (or
/// passed in by the caller, e.g. the flow loop, to avoid recomputation)
/// and shared read-only across the per-edge solves.
FieldDetail orc_field_detail(const WeightedGraph& g, const MeasureSpec& measure_spec,
                             const PointCloud* cloud = nullptr, int threads = 1,
                             const std::vector<std::vector<double>>* metric_rows = nullptr);
CurvatureField orc_field(const WeightedGraph& g, const MeasureSpec& measure_spec,
                         const PointCloud* cloud = nullptr, int threads = 1);

}  // namespace ricci
