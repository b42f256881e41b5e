#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ricci/error.hpp"

namespace ricci {

/// Point set in R^d (d small), optionally carrying ground-truth geometry:
/// a connected-component id per point, a 2D chart (u, v) in which geodesic
/// distance within a component is Euclidean, and the raw generator
/// parameter (angle or curve parameter) for exactness checks.
struct PointCloud {
  Eigen::MatrixXd points;         // n x d, row per point
  std::vector<int> component;     // size n when present
  Eigen::MatrixXd chart;          // n x 2 when present
  std::vector<double> param;      // size n when present
  std::string kind = "ingested";

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
  bool has_components() const { return !component.empty(); }
  bool has_chart() const { return chart.rows() == points.rows() && chart.cols() > 0; }
  int component_count() const;
  void require_point(int i, const char* what) const;
};

/// l_p distance between points i and j; p_norm >= 1 or +inf (Chebyshev).
double lp_distance(const PointCloud& c, int i, int j, double p_norm);

/// Euclidean distance in the chart between i and j (same component assumed).
double chart_distance(const PointCloud& c, int i, int j);

/// Indices of the k nearest neighbors of x (x excluded), ordered by
/// (distance, index); ties at the k-th distance resolve to smaller indices.
std::vector<int> knn_of(const PointCloud& c, int x, int k, double p_norm = 2.0);

}  // namespace ricci
