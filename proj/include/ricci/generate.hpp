#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ricci/graph.hpp"
#include "ricci/point_cloud.hpp"

namespace ricci {

/// Graph bundled with its generation ground truth: planted block per node
/// (SBM) and/or shortcut flag per edge (kNN graphs over manifolds).
struct LabeledGraph {
  WeightedGraph graph;
  std::vector<int> node_label;              // empty when absent
  std::vector<std::uint8_t> edge_shortcut;  // aligned with graph.edges(); empty when absent
};

/// Stochastic block model: n nodes in k equal blocks, unit edge lengths,
/// intra-block edge probability p_intra, inter-block rho * p_intra.
/// Redraws with a derived seed if the sample is disconnected (at most 20
/// attempts, then CannotConnect). Same seed, same graph.
LabeledGraph sbm(int n, int k, double p_intra, double rho, std::uint64_t seed);

enum class ManifoldKind { ConcentricCircles, Moons, SCurve, SwissRoll3d };

ManifoldKind manifold_kind_from_name(const std::string& name);
std::string manifold_kind_name(ManifoldKind kind);

struct ManifoldParams {
  double noise = 0.05;  // stddev of isotropic Gaussian ambient noise
  double r1 = 1.0;      // ConcentricCircles inner radius
  double r2 = 2.0;      // ConcentricCircles outer radius
};

/// Samples n points with ambient Gaussian noise. Points carry component
/// ids, a 2D chart in which same-component geodesics are Euclidean, and
/// the raw generator parameter per point:
///   concentric_circles: 2D, two circles, chart (r * angle, 0), param angle
///   moons:              2D, two half circles, chart (arc angle, 0), param angle
///   s_curve:            3D, unit-speed S in x-z times a height, chart
///                       (curve parameter, height), param curve parameter
///   swiss_roll_3d:      3D spiral times a height, chart (unrolled arc
///                       length, height), param spiral parameter t with
///                       x = t cos t, z = t sin t before noise
PointCloud manifold(ManifoldKind kind, int n, const ManifoldParams& params, std::uint64_t seed);

struct ShortcutRule {
  double ratio = 3.0;  // flag same-chart edges with chart dist > ratio * ambient dist
};

/// Symmetric k-nearest-neighbor graph over the cloud; edge length is the
/// ambient l_{p_norm} distance, neighbor ties resolve to smaller indices.
/// Edges are flagged as shortcuts when the endpoints lie in different
/// components, or (single-component clouds with a chart) when the chart
/// distance exceeds ratio x ambient distance. node_label carries the
/// component ids when present.
LabeledGraph knn_graph_with_labels(const PointCloud& cloud, int k, const ShortcutRule& rule = {},
                                   double p_norm = 2.0);

}  // namespace ricci
