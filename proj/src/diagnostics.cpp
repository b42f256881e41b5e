#include "ricci/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ricci/orc.hpp"
#include "ricci/util.hpp"

namespace ricci {

RootSensitivityRecord root_sensitivity(const WeightedGraph& g, const MeasureSpec& measure,
                                       double p, NodeId root_a, NodeId root_b,
                                       const PointCloud* cloud, int threads) {
  g.require_node(root_a, "root_sensitivity");
  g.require_node(root_b, "root_sensitivity");
  TreeSpec spec_a{TreeMode::Spt, root_a, 0};
  TreeSpec spec_b{TreeMode::Spt, root_b, 0};

  RootSensitivityRecord rec;
  rec.root_a = root_a;
  rec.root_b = root_b;

  auto ea = extract_tree(g, spec_a).edge_set();
  auto eb = extract_tree(g, spec_b).edge_set();
  std::vector<std::pair<NodeId, NodeId>> sym;
  std::set_symmetric_difference(ea.begin(), ea.end(), eb.begin(), eb.end(),
                                std::back_inserter(sym));
  rec.tree_edge_delta = static_cast<int>(sym.size());

  FieldDetail fa = src_field_detail(g, spec_a, measure, p, cloud, threads);
  // Cut masses are side-invariant for probability measures, so equal tree
  // edge sets give the same field regardless of root; reuse it to keep the
  // zero-difference case exact.
  FieldDetail fb = rec.tree_edge_delta == 0
                       ? fa
                       : src_field_detail(g, spec_b, measure, p, cloud, threads);

  int m = g.edge_count();
  double acc = 0;
  rec.d_min = std::numeric_limits<double>::infinity();
  rec.s_max = 0;
  for (int id = 0; id < m; ++id) {
    acc += std::abs(fa.field.kappa[static_cast<std::size_t>(id)] -
                    fb.field.kappa[static_cast<std::size_t>(id)]);
    rec.d_min = std::min({rec.d_min, fa.d[static_cast<std::size_t>(id)],
                          fb.d[static_cast<std::size_t>(id)]});
    rec.s_max = std::max({rec.s_max, fa.s[static_cast<std::size_t>(id)],
                          fb.s[static_cast<std::size_t>(id)]});
  }
  rec.mean_abs_diff = m > 0 ? acc / m : 0.0;
  for (const Edge& e : g.edges()) rec.ell_max = std::max(rec.ell_max, e.length);
  rec.bound_constant =
      rec.ell_max * (1.0 / rec.d_min + rec.s_max / (rec.d_min * rec.d_min));
  rec.ratio = rec.tree_edge_delta > 0 ? rec.mean_abs_diff / rec.tree_edge_delta : 0.0;
  return rec;
}

namespace {

double max_abs(const std::vector<double>& xs) {
  double m = 0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

double tree_total_length(const RootedTree& t) {
  double acc = 0;
  for (NodeId c = 0; c < t.node_count(); ++c)
    if (c != t.root()) acc += t.parent_length(c);
  return acc;
}

}  // namespace

std::vector<DiracSweepRow> dirac_sweep_alpha(const WeightedGraph& g, const TreeSpec& tree,
                                             double p, std::span<const double> alphas,
                                             int threads) {
  std::vector<DiracSweepRow> rows;
  rows.reserve(alphas.size());
  RootedTree t = extract_tree(g, tree);
  double lambda_total = tree_total_length(t);
  for (double alpha : alphas) {
    MeasureSpec ms = MeasureSpec::lazy(alpha);
    FieldDetail src = src_field_detail(g, tree, ms, p, nullptr, threads);
    FieldDetail orc = orc_field_detail(g, ms, nullptr, threads);
    DiracSweepRow row;
    row.parameter = alpha;
    row.max_abs_src = max_abs(src.field.kappa);
    row.max_abs_orc = max_abs(orc.field.kappa);
    double d_min = std::numeric_limits<double>::infinity();
    for (double d : src.d) d_min = std::min(d_min, d);
    row.envelope = (1.0 - alpha) * lambda_total / d_min;
    rows.push_back(row);
  }
  return rows;
}

std::vector<DiracSweepRow> dirac_sweep_sigma(const WeightedGraph& g, const PointCloud& cloud,
                                             const TreeSpec& tree, double p, int k, double p_norm,
                                             std::span<const double> sigmas, int threads) {
  std::vector<DiracSweepRow> rows;
  rows.reserve(sigmas.size());
  for (double sigma : sigmas) {
    MeasureSpec ms = MeasureSpec::gaussian(k, sigma, p_norm);
    FieldDetail src = src_field_detail(g, tree, ms, p, &cloud, threads);
    FieldDetail orc = orc_field_detail(g, ms, &cloud, threads);
    DiracSweepRow row;
    row.parameter = sigma;
    row.max_abs_src = max_abs(src.field.kappa);
    row.max_abs_orc = max_abs(orc.field.kappa);
    rows.push_back(row);
  }
  return rows;
}

Histogram curvature_histogram(const CurvatureField& field, int bins) {
  if (bins < 1) raise(Errc::InvalidArgument, "histogram needs at least one bin");
  if (field.kappa.empty()) raise(Errc::InvalidArgument, "histogram of an empty field");
  double lo = field.kappa[0], hi = field.kappa[0];
  for (double x : field.kappa) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b)
    h.edges[static_cast<std::size_t>(b)] = lo + width * b;
  h.edges.back() = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double x : field.kappa) {
    int b = width > 0 ? std::min(bins - 1, static_cast<int>((x - lo) / width)) : 0;
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

std::vector<TreeModeSummary> tree_robustness(const WeightedGraph& g, const MeasureSpec& measure,
                                             double p, NodeId root,
                                             std::span<const std::uint64_t> seeds, int bins,
                                             const PointCloud* cloud, int threads) {
  std::vector<TreeModeSummary> out;
  auto add = [&](const TreeSpec& spec, const std::string& name) {
    CurvatureField f = src_field(g, spec, measure, p, cloud, threads);
    TreeModeSummary s;
    s.mode = name;
    s.stats = summarize(f.kappa);
    s.hist = curvature_histogram(f, bins);
    out.push_back(std::move(s));
  };
  add(TreeSpec{TreeMode::Spt, root, 0}, "spt");
  add(TreeSpec{TreeMode::Mst, root, 0}, "mst");
  for (std::uint64_t seed : seeds)
    add(TreeSpec{TreeMode::Random, root, seed}, "random(seed=" + std::to_string(seed) + ")");
  return out;
}

DetourStats detour_ratio_stats(const WeightedGraph& g, const RootedTree& tree) {
  DetourStats st;
  if (g.edge_count() == 0) return st;
  double acc = 0;
  int count = 0;
  st.max_ratio = 1;
  for (const Edge& e : g.edges()) {
    double ratio = tree.path_length(e.u, e.v) / e.length;
    acc += ratio;
    st.max_ratio = std::max(st.max_ratio, ratio);
    if (ratio > 1.0 + 1e-12) ++count;
  }
  st.mean_ratio = acc / g.edge_count();
  st.non_tree_edges = count;
  return st;
}

std::vector<BenchRecord> bench(const WeightedGraph& g, std::span<const FlowMethod> methods,
                               const MeasureSpec& measure, int iterations, int reps,
                               const PointCloud* cloud, int threads) {
  if (iterations < 1 || reps < 1) raise(Errc::InvalidArgument, "bench needs iterations, reps >= 1");
  std::vector<BenchRecord> out;
  for (const FlowMethod& method : methods) {
    BenchRecord rec;
    rec.method = method.name();
    rec.nodes = g.node_count();
    rec.edges = g.edge_count();
    rec.mean_degree = g.node_count() > 0 ? 2.0 * g.edge_count() / g.node_count() : 0;
    rec.iterations = iterations;
    rec.reps = reps;
    rec.threads = threads;
    std::vector<double> per_iter;
    per_iter.reserve(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
      FlowState st = init_flow(g, threads);
      WallTimer timer;
      for (int it = 0; it < iterations; ++it)
        flow_step(g, st, method, measure, cloud, threads);
      per_iter.push_back(timer.elapsed_ms() / iterations);
    }
    rec.median_ms = quantile(per_iter, 0.5);
    rec.q25_ms = quantile(per_iter, 0.25);
    rec.q75_ms = quantile(per_iter, 0.75);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace ricci
