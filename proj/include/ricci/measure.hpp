#pragma once

#include <string>
#include <vector>

#include "ricci/graph.hpp"
#include "ricci/point_cloud.hpp"

namespace ricci {

/// Probability measure with finite support over node ids. Support is
/// sorted, ids unique, masses strictly positive and summing to 1 (within
/// 1e-12); zero-mass points are never stored.
struct DiscreteMeasure {
  std::vector<NodeId> support;
  std::vector<double> mass;

  double total() const;
  /// Mass at node v (0 when v is outside the support).
  double at(NodeId v) const;
  void validate() const;
};

/// Point mass at x.
DiscreteMeasure dirac(NodeId x, int node_count);
DiscreteMeasure dirac(const WeightedGraph& g, NodeId x);

/// Lazy random-walk measure: alpha at x, (1 - alpha)/deg(x) on each
/// one-hop neighbor. alpha = 1 degenerates to the dirac at x; alpha < 1 on
/// an isolated node is an error.
DiscreteMeasure lazy_rw_measure(const WeightedGraph& g, NodeId x, double alpha);

/// Gaussian kernel over {x} and the k nearest neighbors of x:
/// weight(v) proportional to exp(-d(x,v)^2 / sigma^2), d the l_{p_norm}
/// ambient distance. Exponents are shifted by their maximum before
/// exponentiation, so the weight at x is exactly 1 and the measure can
/// never underflow to all zeros. When every other weight underflows the
/// result is the dirac at x and *degenerate (if given) is set.
DiscreteMeasure gaussian_knn_measure(const PointCloud& cloud, int x, int k, double sigma,
                                     double p_norm = 2.0, bool* degenerate = nullptr);

/// Declarative recipe for per-node measures, so fields, flows and sweeps
/// can share one configuration object.
struct MeasureSpec {
  enum class Kind { Dirac, LazyRw, GaussianKnn };
  Kind kind = Kind::LazyRw;
  double alpha = 0.5;   // LazyRw
  int k = 10;           // GaussianKnn
  double sigma = 1.0;   // GaussianKnn
  double p_norm = 2.0;  // GaussianKnn

  static MeasureSpec make_dirac();
  static MeasureSpec lazy(double alpha);
  static MeasureSpec gaussian(int k, double sigma, double p_norm = 2.0);
  std::string describe() const;
};

/// Builds the measure at x according to spec. GaussianKnn requires cloud
/// (row i of the cloud is node i of the graph).
DiscreteMeasure make_measure(const WeightedGraph& g, const PointCloud* cloud,
                             const MeasureSpec& spec, NodeId x, bool* degenerate = nullptr);

}  // namespace ricci
