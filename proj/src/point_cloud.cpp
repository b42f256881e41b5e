#include "ricci/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace ricci {

int PointCloud::component_count() const {
  if (!has_components()) return 1;
  std::set<int> distinct(component.begin(), component.end());
  return static_cast<int>(distinct.size());
}

void PointCloud::require_point(int i, const char* what) const {
  if (i < 0 || i >= size())
    raise(Errc::UnknownNode, std::string(what) + ": point " + std::to_string(i) +
                                 " not in [0, " + std::to_string(size()) + ")");
}

double lp_distance(const PointCloud& c, int i, int j, double p_norm) {
  c.require_point(i, "lp_distance");
  c.require_point(j, "lp_distance");
  if (!(p_norm >= 1.0)) raise(Errc::InvalidArgument, "p_norm must be >= 1");
  Eigen::VectorXd diff = (c.points.row(i) - c.points.row(j)).cwiseAbs().transpose();
  if (std::isinf(p_norm)) return diff.maxCoeff();
  if (p_norm == 2.0) return diff.norm();
  if (p_norm == 1.0) return diff.sum();
  double acc = 0;
  for (int k = 0; k < diff.size(); ++k) acc += std::pow(diff[k], p_norm);
  return std::pow(acc, 1.0 / p_norm);
}

double chart_distance(const PointCloud& c, int i, int j) {
  if (!c.has_chart()) raise(Errc::InvalidArgument, "point cloud has no chart");
  c.require_point(i, "chart_distance");
  c.require_point(j, "chart_distance");
  return (c.chart.row(i) - c.chart.row(j)).norm();
}

std::vector<int> knn_of(const PointCloud& c, int x, int k, double p_norm) {
  c.require_point(x, "knn_of");
  if (k < 1 || k >= c.size())
    raise(Errc::InvalidArgument,
          "knn_of: k = " + std::to_string(k) + " outside [1, " + std::to_string(c.size()) + ")");
  std::vector<std::pair<double, int>> by_dist;
  by_dist.reserve(static_cast<std::size_t>(c.size() - 1));
  for (int j = 0; j < c.size(); ++j) {
    if (j == x) continue;
    by_dist.emplace_back(lp_distance(c, x, j, p_norm), j);
  }
  std::partial_sort(by_dist.begin(), by_dist.begin() + k, by_dist.end());
  std::vector<int> out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = by_dist[static_cast<std::size_t>(i)].second;
  return out;
}

}  // namespace ricci
