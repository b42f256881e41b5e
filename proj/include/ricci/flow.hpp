#pragma once

#include <span>
#include <string>
#include <vector>

#include "ricci/graph.hpp"
#include "ricci/orc.hpp"
#include "ricci/sobolev.hpp"

namespace ricci {

/// Which curvature drives the flow.
struct FlowMethod {
  enum class Kind { Src, Orc };
  Kind kind = Kind::Src;
  TreeSpec tree;   // Src only
  double p = 1.0;  // Src only

  static FlowMethod src(const TreeSpec& tree, double p = 1.0);
  static FlowMethod orc();
  std::string name() const;
};

struct FlowIterRecord {
  int t = 0;
  double sum_w = 0;
  double max_dkappa = 0;
  double runtime_ms = 0;
  int clamped = 0;
};

struct FlowState {
  int t = 0;
  std::vector<double> weights;  // per edge id
  std::vector<double> kappa;    // curvature used by the latest step
  std::vector<FlowIterRecord> trace;
  bool converged = false;
  int total_clamped = 0;
};

/// Initial weights: the shortest-path distance between the endpoints of
/// each edge under the input lengths, rescaled so the weights sum to |E|.
/// This makes the edge weights a metric, so a zero-curvature step is the
/// identity.
FlowState init_flow(const WeightedGraph& g, int threads = 1);

/// One update. Computes the curvature field on the current weights, sets
///   w'(x, y) = (1 - kappa(x, y)) * d(x, y)
/// with d the shortest-path metric of the current weights, rescales so the
/// weights sum to |E| again, and clamps nonpositive results to
/// 1e-8 x mean weight (counted in the trace). Throws AllEdgesCollapsed
/// when every weight vanishes. The iteration's max |kappa_t - kappa_{t-1}|
/// is recorded; at t = 1 the previous field counts as all zeros.
void flow_step(const WeightedGraph& g, FlowState& state, const FlowMethod& method,
               const MeasureSpec& measure, const PointCloud* cloud = nullptr, int threads = 1);

/// Runs at most t_flow steps, stopping early at the first iteration whose
/// max curvature change falls below epsilon.
FlowState run_flow(const WeightedGraph& g, const FlowMethod& method, const MeasureSpec& measure,
                   int t_flow = 20, double epsilon = 1e-4, const PointCloud* cloud = nullptr,
                   int threads = 1);

/// Length-to-similarity transform s = exp(-beta * w).
std::vector<double> to_similarity(std::span<const double> weights, double beta = 1.0);

}  // namespace ricci
