#include "ricci/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ricci {

double DiscreteMeasure::total() const {
  double s = 0;
  for (double m : mass) s += m;
  return s;
}

double DiscreteMeasure::at(NodeId v) const {
  auto it = std::lower_bound(support.begin(), support.end(), v);
  if (it == support.end() || *it != v) return 0.0;
  return mass[static_cast<std::size_t>(it - support.begin())];
}

void DiscreteMeasure::validate() const {
  if (support.size() != mass.size()) raise(Errc::SizeMismatch, "support/mass length");
  if (support.empty()) raise(Errc::InvalidArgument, "empty measure");
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (i > 0 && support[i] <= support[i - 1])
      raise(Errc::InvalidArgument, "support not sorted/unique");
    if (!(mass[i] > 0)) raise(Errc::InvalidArgument, "non-positive mass");
  }
  if (std::abs(total() - 1.0) > 1e-12) raise(Errc::InvalidArgument, "mass does not sum to 1");
}

DiscreteMeasure dirac(NodeId x, int node_count) {
  if (x < 0 || x >= node_count) raise(Errc::UnknownNode, "dirac at node " + std::to_string(x));
  return {{x}, {1.0}};
}

DiscreteMeasure dirac(const WeightedGraph& g, NodeId x) { return dirac(x, g.node_count()); }

DiscreteMeasure lazy_rw_measure(const WeightedGraph& g, NodeId x, double alpha) {
  g.require_node(x, "lazy_rw_measure");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    raise(Errc::InvalidArgument, "alpha = " + std::to_string(alpha) + " outside [0, 1]");
  if (alpha == 1.0) return dirac(g, x);
  int deg = g.degree(x);
  if (deg == 0)
    raise(Errc::IsolatedNode, "node " + std::to_string(x) + " has no neighbors and alpha < 1");
  DiscreteMeasure mu;
  double share = (1.0 - alpha) / deg;
  // neighbors() is sorted by id; x slots in at its position.
  bool x_placed = alpha == 0.0;  // zero mass at x is not stored
  for (const auto& nb : g.neighbors(x)) {
    if (!x_placed && x < nb.node) {
      mu.support.push_back(x);
      mu.mass.push_back(alpha);
      x_placed = true;
    }
    mu.support.push_back(nb.node);
    mu.mass.push_back(share);
  }
  if (!x_placed) {
    mu.support.push_back(x);
    mu.mass.push_back(alpha);
  }
  return mu;
}

DiscreteMeasure gaussian_knn_measure(const PointCloud& cloud, int x, int k, double sigma,
                                     double p_norm, bool* degenerate) {
  cloud.require_point(x, "gaussian_knn_measure");
  if (!(sigma > 0)) raise(Errc::InvalidArgument, "sigma must be positive");
  std::vector<int> nbrs = knn_of(cloud, x, k, p_norm);
  std::vector<NodeId> support(nbrs.begin(), nbrs.end());
  support.push_back(x);
  std::sort(support.begin(), support.end());

  std::vector<double> expo(support.size());
  double emax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < support.size(); ++i) {
    double d = lp_distance(cloud, x, support[i], p_norm);
    expo[i] = -(d * d) / (sigma * sigma);
    emax = std::max(emax, expo[i]);
  }
  DiscreteMeasure mu;
  double z = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    double w = std::exp(expo[i] - emax);
    if (w > 0) {
      mu.support.push_back(support[i]);
      mu.mass.push_back(w);
      z += w;
    }
  }
  for (double& m : mu.mass) m /= z;
  if (degenerate) *degenerate = mu.support.size() == 1;
  return mu;
}

MeasureSpec MeasureSpec::make_dirac() {
  MeasureSpec s;
  s.kind = Kind::Dirac;
  return s;
}

MeasureSpec MeasureSpec::lazy(double alpha) {
  MeasureSpec s;
  s.kind = Kind::LazyRw;
  s.alpha = alpha;
  return s;
}

MeasureSpec MeasureSpec::gaussian(int k, double sigma, double p_norm) {
  MeasureSpec s;
  s.kind = Kind::GaussianKnn;
  s.k = k;
  s.sigma = sigma;
  s.p_norm = p_norm;
  return s;
}

std::string MeasureSpec::describe() const {
  char buf[128];
  switch (kind) {
    case Kind::Dirac:
      return "dirac";
    case Kind::LazyRw:
      std::snprintf(buf, sizeof(buf), "lazy(alpha=%g)", alpha);
      return buf;
    case Kind::GaussianKnn:
      std::snprintf(buf, sizeof(buf), "gaussian(k=%d, sigma=%g, p_norm=%g)", k, sigma, p_norm);
      return buf;
  }
  return "?";
}

DiscreteMeasure make_measure(const WeightedGraph& g, const PointCloud* cloud,
                             const MeasureSpec& spec, NodeId x, bool* degenerate) {
  if (degenerate) *degenerate = false;
  switch (spec.kind) {
    case MeasureSpec::Kind::Dirac:
      return dirac(g, x);
    case MeasureSpec::Kind::LazyRw:
      return lazy_rw_measure(g, x, spec.alpha);
    case MeasureSpec::Kind::GaussianKnn: {
      if (cloud == nullptr)
        raise(Errc::InvalidArgument, "gaussian measure needs a point cloud");
      if (cloud->size() != g.node_count())
        raise(Errc::SizeMismatch, "point cloud size != graph node count");
      return gaussian_knn_measure(*cloud, x, spec.k, spec.sigma, spec.p_norm, degenerate);
    }
  }
  raise(Errc::UnknownKind, "measure kind");
}

}  // namespace ricci
