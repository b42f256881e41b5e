#include "ricci/generate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace ricci {

LabeledGraph sbm(int n, int k, double p_intra, double rho, std::uint64_t seed) {
  if (n < 1 || k < 1 || n % k != 0)
    raise(Errc::InvalidArgument, "sbm: n must be a positive multiple of k");
  if (!(p_intra > 0 && p_intra <= 1)) raise(Errc::InvalidArgument, "sbm: p_intra outside (0, 1]");
  if (!(rho >= 0) || rho * p_intra > 1)
    raise(Errc::InvalidArgument, "sbm: rho * p_intra outside [0, 1]");
  int block = n / k;
  std::vector<int> label(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) label[static_cast<std::size_t>(v)] = v / block;

  double p_inter = rho * p_intra;
  for (int attempt = 0; attempt < 20; ++attempt) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(attempt));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<EdgeSpec> edges;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        double p = label[static_cast<std::size_t>(u)] == label[static_cast<std::size_t>(v)]
                       ? p_intra
                       : p_inter;
        if (unif(rng) < p) edges.push_back({u, v, 1.0});
      }
    }
    WeightedGraph g = WeightedGraph::build(n, edges);
    if (g.connected() || n == 1) return {std::move(g), std::move(label), {}};
  }
  raise(Errc::CannotConnect, "sbm: no connected sample in 20 attempts");
}

ManifoldKind manifold_kind_from_name(const std::string& name) {
  if (name == "concentric_circles") return ManifoldKind::ConcentricCircles;
  if (name == "moons") return ManifoldKind::Moons;
  if (name == "s_curve") return ManifoldKind::SCurve;
  if (name == "swiss_roll_3d") return ManifoldKind::SwissRoll3d;
  raise(Errc::UnknownKind, "manifold kind '" + name + "'");
}

std::string manifold_kind_name(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::ConcentricCircles: return "concentric_circles";
    case ManifoldKind::Moons: return "moons";
    case ManifoldKind::SCurve: return "s_curve";
    case ManifoldKind::SwissRoll3d: return "swiss_roll_3d";
  }
  return "?";
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// Arc length of the spiral (t cos t, t sin t) from 0 to t.
double spiral_arclen(double t) {
  return 0.5 * (t * std::sqrt(1.0 + t * t) + std::asinh(t));
}

}  // namespace

PointCloud manifold(ManifoldKind kind, int n, const ManifoldParams& params, std::uint64_t seed) {
  if (n < 2) raise(Errc::InvalidArgument, "manifold: need at least 2 points");
  if (!(params.noise >= 0)) raise(Errc::InvalidArgument, "manifold: negative noise");
  if (kind == ManifoldKind::ConcentricCircles && !(params.r1 > 0 && params.r2 > params.r1))
    raise(Errc::InvalidArgument, "manifold: need 0 < r1 < r2");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  PointCloud cloud;
  cloud.kind = manifold_kind_name(kind);
  int d = (kind == ManifoldKind::SCurve || kind == ManifoldKind::SwissRoll3d) ? 3 : 2;
  cloud.points.resize(n, d);
  cloud.chart.resize(n, 2);
  cloud.component.assign(static_cast<std::size_t>(n), 0);
  cloud.param.assign(static_cast<std::size_t>(n), 0.0);

  for (int i = 0; i < n; ++i) {
    switch (kind) {
      case ManifoldKind::ConcentricCircles: {
        int circle = i < n / 2 ? 0 : 1;
        double r = circle == 0 ? params.r1 : params.r2;
        double theta = 2.0 * kPi * unif(rng);
        cloud.points(i, 0) = r * std::cos(theta);
        cloud.points(i, 1) = r * std::sin(theta);
        cloud.component[static_cast<std::size_t>(i)] = circle;
        cloud.chart(i, 0) = r * theta;
        cloud.chart(i, 1) = 0.0;
        cloud.param[static_cast<std::size_t>(i)] = theta;
        break;
      }
      case ManifoldKind::Moons: {
        int moon = i < n / 2 ? 0 : 1;
        double t = kPi * unif(rng);
        if (moon == 0) {
          cloud.points(i, 0) = std::cos(t);
          cloud.points(i, 1) = std::sin(t);
        } else {
          cloud.points(i, 0) = 1.0 - std::cos(t);
          cloud.points(i, 1) = 0.5 - std::sin(t);
        }
        cloud.component[static_cast<std::size_t>(i)] = moon;
        cloud.chart(i, 0) = t;  // unit radius, so the angle is arc length
        cloud.chart(i, 1) = 0.0;
        cloud.param[static_cast<std::size_t>(i)] = t;
        break;
      }
      case ManifoldKind::SCurve: {
        double t = 1.5 * kPi * (2.0 * unif(rng) - 1.0);
        double h = 2.0 * unif(rng);
        cloud.points(i, 0) = std::sin(t);
        cloud.points(i, 1) = h;
        cloud.points(i, 2) = (t >= 0 ? 1.0 : -1.0) * (std::cos(t) - 1.0);
        // (sin t, sign(t)(cos t - 1)) is unit speed, so t is arc length
        cloud.chart(i, 0) = t;
        cloud.chart(i, 1) = h;
        cloud.param[static_cast<std::size_t>(i)] = t;
        break;
      }
      case ManifoldKind::SwissRoll3d: {
        double t = 1.5 * kPi * (1.0 + 2.0 * unif(rng));
        double h = 21.0 * unif(rng);
        cloud.points(i, 0) = t * std::cos(t);
        cloud.points(i, 1) = h;
        cloud.points(i, 2) = t * std::sin(t);
        cloud.chart(i, 0) = spiral_arclen(t);
        cloud.chart(i, 1) = h;
        cloud.param[static_cast<std::size_t>(i)] = t;
        break;
      }
    }
    if (params.noise > 0) {
      for (int c = 0; c < d; ++c) cloud.points(i, c) += params.noise * gauss(rng);
    }
  }
  return cloud;
}

LabeledGraph knn_graph_with_labels(const PointCloud& cloud, int k, const ShortcutRule& rule,
                                   double p_norm) {
  int n = cloud.size();
  if (k < 2 || k >= n) raise(Errc::InvalidArgument, "knn graph needs 2 <= k < n");
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j : knn_of(cloud, i, k, p_norm))
      pairs.emplace(std::min<NodeId>(i, j), std::max<NodeId>(i, j));
  }
  std::vector<EdgeSpec> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) {
    double len = lp_distance(cloud, u, v, p_norm);
    if (!(len > 0))
      raise(Errc::InvalidArgument, "coincident points give zero-length edge (" +
                                       std::to_string(u) + ", " + std::to_string(v) + ")");
    edges.push_back({u, v, len});
  }
  LabeledGraph out;
  out.graph = WeightedGraph::build(n, edges);
  if (cloud.has_components()) out.node_label = cloud.component;

  bool multi = cloud.has_components() && cloud.component_count() > 1;
  bool chart_rule = cloud.has_chart();
  out.edge_shortcut.assign(static_cast<std::size_t>(out.graph.edge_count()), 0);
  for (int id = 0; id < out.graph.edge_count(); ++id) {
    const Edge& e = out.graph.edge(id);
    bool flag = false;
    if (multi) {
      flag = cloud.component[static_cast<std::size_t>(e.u)] !=
             cloud.component[static_cast<std::size_t>(e.v)];
    } else if (chart_rule) {
      flag = chart_distance(cloud, e.u, e.v) > rule.ratio * e.length;
    }
    out.edge_shortcut[static_cast<std::size_t>(id)] = flag ? 1 : 0;
  }
  if (!multi && !chart_rule) out.edge_shortcut.clear();
  return out;
}

}  // namespace ricci
