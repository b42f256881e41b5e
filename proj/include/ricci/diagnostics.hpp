#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ricci/flow.hpp"
#include "ricci/graph.hpp"
#include "ricci/sobolev.hpp"
#include "ricci/util.hpp"

namespace ricci {

/// Root-dependence probe: curvature fields from two shortest-path-tree
/// roots, compared edge by edge against the instance constant
///   C = ell_max (1/D_min + S_max/D_min^2),
/// with ell_max the longest graph edge and D_min/S_max taken over the
/// evaluated edge pairs of both fields.
struct RootSensitivityRecord {
  NodeId root_a = 0;
  NodeId root_b = 0;
  int tree_edge_delta = 0;     // |E(T_a) symmetric-difference E(T_b)|
  double mean_abs_diff = 0;    // (1/|E|) sum_e |kappa_a - kappa_b|
  double ratio = 0;            // mean_abs_diff / tree_edge_delta (0 when delta = 0)
  double bound_constant = 0;   // C above
  double ell_max = 0;
  double d_min = 0;
  double s_max = 0;
};

RootSensitivityRecord root_sensitivity(const WeightedGraph& g, const MeasureSpec& measure,
                                       double p, NodeId root_a, NodeId root_b,
                                       const PointCloud* cloud = nullptr, int threads = 1);

/// One row per schedule point of a concentration sweep. envelope is the
/// lazy-family bound (1 - alpha) * (total tree length) / D_min; it is
/// absent for sigma schedules.
struct DiracSweepRow {
  double parameter = 0;
  double max_abs_src = 0;
  double max_abs_orc = 0;
  std::optional<double> envelope;
};

std::vector<DiracSweepRow> dirac_sweep_alpha(const WeightedGraph& g, const TreeSpec& tree,
                                             double p, std::span<const double> alphas,
                                             int threads = 1);

std::vector<DiracSweepRow> dirac_sweep_sigma(const WeightedGraph& g, const PointCloud& cloud,
                                             const TreeSpec& tree, double p, int k, double p_norm,
                                             std::span<const double> sigmas, int threads = 1);

struct Histogram {
  std::vector<double> edges;  // bins + 1 boundaries
  std::vector<int> counts;    // per bin; sums to the sample size
};

/// Uniform-width histogram over [min, max] of the field; a constant field
/// lands in a single bin.
Histogram curvature_histogram(const CurvatureField& field, int bins);

/// Kappa summaries for the same graph and measures across tree modes:
/// SPT(root), MST, and one RANDOM tree per seed.
struct TreeModeSummary {
  std::string mode;
  Stats stats;
  Histogram hist;
};

std::vector<TreeModeSummary> tree_robustness(const WeightedGraph& g, const MeasureSpec& measure,
                                             double p, NodeId root,
                                             std::span<const std::uint64_t> seeds, int bins,
                                             const PointCloud* cloud = nullptr, int threads = 1);

/// Tree-path detour of non-tree edges: ratio of D_1 tree distance to edge
/// length (1 for tree edges).
struct DetourStats {
  double max_ratio = 1;
  double mean_ratio = 1;
  int non_tree_edges = 0;
};
DetourStats detour_ratio_stats(const WeightedGraph& g, const RootedTree& tree);

/// Wall time of one flow iteration (curvature field + weight update),
/// median and quartiles over reps.
struct BenchRecord {
  std::string method;
  int nodes = 0;
  int edges = 0;
  double mean_degree = 0;
  int iterations = 0;
  int reps = 0;
  int threads = 1;
  double median_ms = 0;
  double q25_ms = 0;
  double q75_ms = 0;
};

std::vector<BenchRecord> bench(const WeightedGraph& g, std::span<const FlowMethod> methods,
                               const MeasureSpec& measure, int iterations, int reps,
                               const PointCloud* cloud = nullptr, int threads = 1);

}  // namespace ricci
