#include "ricci/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ricci/util.hpp"

namespace ricci {

namespace {

void require_order(double p) {
  if (!(p >= 1.0) || std::isinf(p))
    raise(Errc::InvalidArgument, "transport order p must be finite and >= 1");
}

double apply_root(double acc, double p) { return p == 1.0 ? acc : std::pow(acc, 1.0 / p); }

double power_term(double diff, double p) {
  double a = std::abs(diff);
  return p == 1.0 ? a : (p == 2.0 ? a * a : std::pow(a, p));
}

}  // namespace

CutMassVector cut_mass(const RootedTree& tree, const DiscreteMeasure& mu) {
  std::vector<std::pair<NodeId, double>> acc;
  for (std::size_t i = 0; i < mu.support.size(); ++i) {
    NodeId c = mu.support[i];
    if (c < 0 || c >= tree.node_count()) raise(Errc::UnknownNode, "measure support outside tree");
    double m = mu.mass[i];
    while (c != tree.root()) {
      acc.emplace_back(c, m);
      c = tree.parent(c);
    }
  }
  // Stable sort keeps per-child contributions in support order, so the
  // summation order (and hence the rounding) is independent of tree shape.
  std::stable_sort(acc.begin(), acc.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  CutMassVector out;
  out.child.reserve(acc.size());
  out.value.reserve(acc.size());
  for (const auto& [c, m] : acc) {
    if (!out.child.empty() && out.child.back() == c) {
      out.value.back() += m;
    } else {
      out.child.push_back(c);
      out.value.push_back(m);
    }
  }
  return out;
}

std::vector<double> cut_mass_dense(const RootedTree& tree, const DiscreteMeasure& mu) {
  std::vector<double> out(static_cast<std::size_t>(tree.node_count()), 0.0);
  for (std::size_t i = 0; i < mu.support.size(); ++i) {
    NodeId c = mu.support[i];
    if (c < 0 || c >= tree.node_count()) raise(Errc::UnknownNode, "measure support outside tree");
    while (c != tree.root()) {
      out[static_cast<std::size_t>(c)] += mu.mass[i];
      c = tree.parent(c);
    }
  }
  return out;
}

double sobolev_distance(const RootedTree& tree, const CutMassVector& a, const CutMassVector& b,
                        double p) {
  require_order(p);
  double acc = 0;
  std::size_t i = 0, j = 0;
  while (i < a.child.size() || j < b.child.size()) {
    NodeId ca = i < a.child.size() ? a.child[i] : tree.node_count();
    NodeId cb = j < b.child.size() ? b.child[j] : tree.node_count();
    NodeId c = std::min(ca, cb);
    double diff = (ca == c ? a.value[i++] : 0.0) - (cb == c ? b.value[j++] : 0.0);
    if (diff != 0.0) acc += tree.parent_length(c) * power_term(diff, p);
  }
  return apply_root(acc, p);
}

double sobolev_distance(const RootedTree& tree, const DiscreteMeasure& mu,
                        const DiscreteMeasure& nu, double p) {
  return sobolev_distance(tree, cut_mass(tree, mu), cut_mass(tree, nu), p);
}

double sobolev_distance_dense(const RootedTree& tree, const std::vector<double>& a,
                              const std::vector<double>& b, double p) {
  require_order(p);
  if (a.size() != b.size() || static_cast<int>(a.size()) != tree.node_count())
    raise(Errc::SizeMismatch, "dense cut-mass length");
  double acc = 0;
  for (NodeId c = 0; c < tree.node_count(); ++c) {
    if (c == tree.root()) continue;
    double diff = a[static_cast<std::size_t>(c)] - b[static_cast<std::size_t>(c)];
    if (diff != 0.0) acc += tree.parent_length(c) * power_term(diff, p);
  }
  return apply_root(acc, p);
}

double dirac_distance(const RootedTree& tree, NodeId x, NodeId y, double p) {
  require_order(p);
  if (x == y) raise(Errc::SameNode, "dirac distance needs two distinct nodes");
  // Accumulated through the same cut-mass merge as S_p, so that point-mass
  // measures satisfy S_p(delta_x, delta_y) == D_p(x, y) bitwise and the
  // dirac curvature is exactly zero.
  int n = tree.node_count();
  return sobolev_distance(tree, cut_mass(tree, dirac(x, n)), cut_mass(tree, dirac(y, n)), p);
}

double src_edge(const RootedTree& tree, const DiscreteMeasure& mu_x, const DiscreteMeasure& mu_y,
                NodeId x, NodeId y, double p) {
  if (x == y) raise(Errc::SameNode, "curvature of a pair needs x != y");
  double d = dirac_distance(tree, x, y, p);
  double s = sobolev_distance(tree, mu_x, mu_y, p);
  return 1.0 - s / d;
}

std::string TreeSpec::describe() const {
  char buf[96];
  switch (mode) {
    case TreeMode::Spt:
      std::snprintf(buf, sizeof(buf), "spt(root=%d)", root);
      return buf;
    case TreeMode::Mst:
      std::snprintf(buf, sizeof(buf), "mst(root=%d)", root);
      return buf;
    case TreeMode::Random:
      std::snprintf(buf, sizeof(buf), "random(seed=%llu, root=%d)",
                    static_cast<unsigned long long>(seed), root);
      return buf;
  }
  return "?";
}

RootedTree extract_tree(const WeightedGraph& g, const TreeSpec& spec) {
  g.require_node(spec.root, "extract_tree");
  g.require_connected("extract_tree");
  switch (spec.mode) {
    case TreeMode::Spt:
      return dijkstra(g, spec.root).tree;
    case TreeMode::Mst: {
      auto ids = kruskal_mst(g);
      return root_tree_from_ids(g, ids, spec.root);
    }
    case TreeMode::Random: {
      auto ids = random_spanning_tree(g, spec.seed);
      return root_tree_from_ids(g, ids, spec.root);
    }
  }
  raise(Errc::UnknownKind, "tree mode");
}

FieldDetail src_field_detail(const WeightedGraph& g, const TreeSpec& tree_spec,
                             const MeasureSpec& measure_spec, double p, const PointCloud* cloud,
                             int threads) {
  require_order(p);
  RootedTree tree = extract_tree(g, tree_spec);

  int n = g.node_count();
  std::vector<CutMassVector> cuts(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> degenerate(static_cast<std::size_t>(n), 0);
  parallel_for(n, threads, [&](std::int64_t v) {
    bool deg = false;
    DiscreteMeasure mu = make_measure(g, cloud, measure_spec, static_cast<NodeId>(v), &deg);
    cuts[static_cast<std::size_t>(v)] = cut_mass(tree, mu);
    degenerate[static_cast<std::size_t>(v)] = deg ? 1 : 0;
  });

  FieldDetail out;
  out.field.p = p;
  out.field.measure = measure_spec;
  out.field.tree = tree_spec;
  switch (tree_spec.mode) {
    case TreeMode::Spt: out.field.method = "SRC-SPT"; break;
    case TreeMode::Mst: out.field.method = "SRC-MST"; break;
    case TreeMode::Random: out.field.method = "SRC-RANDOM"; break;
  }
  int m = g.edge_count();
  out.field.kappa.assign(static_cast<std::size_t>(m), 0.0);
  out.s.assign(static_cast<std::size_t>(m), 0.0);
  out.d.assign(static_cast<std::size_t>(m), 0.0);
  parallel_for(m, threads, [&](std::int64_t id) {
    const Edge& e = g.edge(static_cast<int>(id));
    double s = sobolev_distance(tree, cuts[static_cast<std::size_t>(e.u)],
                                cuts[static_cast<std::size_t>(e.v)], p);
    double d = dirac_distance(tree, e.u, e.v, p);
    out.s[static_cast<std::size_t>(id)] = s;
    out.d[static_cast<std::size_t>(id)] = d;
    out.field.kappa[static_cast<std::size_t>(id)] = 1.0 - s / d;
  });
  for (std::uint8_t f : degenerate) out.degenerate_measures += f;
  return out;
}

CurvatureField src_field(const WeightedGraph& g, const TreeSpec& tree_spec,
                         const MeasureSpec& measure_spec, double p, const PointCloud* cloud,
                         int threads) {
  return src_field_detail(g, tree_spec, measure_spec, p, cloud, threads).field;
}

}  // namespace ricci
