#include "ricci/flow.hpp"

#include <algorithm>
#include <cmath>

#include "ricci/util.hpp"

namespace ricci {

FlowMethod FlowMethod::src(const TreeSpec& tree, double p) {
  FlowMethod m;
  m.kind = Kind::Src;
  m.tree = tree;
  m.p = p;
  return m;
}

FlowMethod FlowMethod::orc() {
  FlowMethod m;
  m.kind = Kind::Orc;
  return m;
}

std::string FlowMethod::name() const {
  if (kind == Kind::Orc) return "ORC";
  switch (tree.mode) {
    case TreeMode::Spt: return "SRC-SPT";
    case TreeMode::Mst: return "SRC-MST";
    case TreeMode::Random: return "SRC-RANDOM";
  }
  return "?";
}

namespace {

void normalize_and_clamp(std::vector<double>& w, FlowIterRecord& rec, int* total_clamped) {
  double sum = 0;
  for (double x : w) sum += x;
  if (!(sum > 0) || !std::isfinite(sum))
    raise(Errc::AllEdgesCollapsed, "all updated weights vanished");
  double scale = static_cast<double>(w.size()) / sum;
  double mean = 0;
  for (double& x : w) {
    x *= scale;
    mean += x;
  }
  mean /= static_cast<double>(w.size());
  double floor = 1e-8 * mean;
  int clamped = 0;
  for (double& x : w) {
    if (!(x > 0)) {
      x = floor;
      ++clamped;
    }
  }
  if (clamped == static_cast<int>(w.size()))
    raise(Errc::AllEdgesCollapsed, "every weight hit the clamp floor");
  rec.clamped = clamped;
  if (total_clamped) *total_clamped += clamped;
  rec.sum_w = 0;
  for (double x : w) rec.sum_w += x;
}

}  // namespace

FlowState init_flow(const WeightedGraph& g, int threads) {
  g.require_connected("init_flow");
  FlowState st;
  if (g.edge_count() == 0) {
    st.converged = true;
    return st;
  }
  auto rows = all_pairs_distances(g, threads);
  st.weights.resize(static_cast<std::size_t>(g.edge_count()));
  for (int id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    st.weights[static_cast<std::size_t>(id)] =
        rows[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)];
  }
  FlowIterRecord rec;
  normalize_and_clamp(st.weights, rec, nullptr);
  return st;
}

void flow_step(const WeightedGraph& g, FlowState& state, const FlowMethod& method,
               const MeasureSpec& measure, const PointCloud* cloud, int threads) {
  if (state.weights.size() != static_cast<std::size_t>(g.edge_count()))
    raise(Errc::SizeMismatch, "flow state does not match graph");
  if (g.edge_count() == 0) return;
  WallTimer timer;
  WeightedGraph gw = g.with_lengths(state.weights);
  auto rows = all_pairs_distances(gw, threads);

  FieldDetail detail = method.kind == FlowMethod::Kind::Orc
                           ? orc_field_detail(gw, measure, cloud, threads, &rows)
                           : src_field_detail(gw, method.tree, measure, method.p, cloud, threads);
  const std::vector<double>& kappa = detail.field.kappa;

  double dk = 0;
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    double prev = state.kappa.empty() ? 0.0 : state.kappa[i];
    dk = std::max(dk, std::abs(kappa[i] - prev));
  }

  std::vector<double> next(kappa.size());
  for (int id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    double d = rows[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)];
    next[static_cast<std::size_t>(id)] = (1.0 - kappa[static_cast<std::size_t>(id)]) * d;
  }
  FlowIterRecord rec;
  rec.t = state.t + 1;
  rec.max_dkappa = dk;
  normalize_and_clamp(next, rec, &state.total_clamped);
  rec.runtime_ms = timer.elapsed_ms();

  state.weights = std::move(next);
  state.kappa = kappa;
  state.t = rec.t;
  state.trace.push_back(rec);
}

FlowState run_flow(const WeightedGraph& g, const FlowMethod& method, const MeasureSpec& measure,
                   int t_flow, double epsilon, const PointCloud* cloud, int threads) {
  if (t_flow < 1) raise(Errc::InvalidArgument, "t_flow must be >= 1");
  FlowState st = init_flow(g, threads);
  if (g.edge_count() == 0) return st;
  for (int t = 1; t <= t_flow; ++t) {
    flow_step(g, st, method, measure, cloud, threads);
    if (st.trace.back().max_dkappa < epsilon) {
      st.converged = true;
      break;
    }
  }
  return st;
}

std::vector<double> to_similarity(std::span<const double> weights, double beta) {
  if (!(beta > 0)) raise(Errc::InvalidArgument, "beta must be positive");
  std::vector<double> s(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) s[i] = std::exp(-beta * weights[i]);
  return s;
}

}  // namespace ricci
