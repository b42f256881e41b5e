#include "ricci/orc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ricci/util.hpp"

namespace ricci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BasisCell {
  int i, j;
  double flow;
};

// Transportation simplex state. Nodes of the basis tree are rows
// (0..R-1) and columns (R..R+C-1); basic cells are its edges.
class TransportSimplex {
 public:
  explicit TransportSimplex(const TransportProblem& tp)
      : tp_(tp), R_(tp.rows()), C_(tp.cols()) {
    cost_scale_ = 1.0;
    for (double c : tp.cost) cost_scale_ = std::max(cost_scale_, std::abs(c));
    basis_pos_.assign(static_cast<std::size_t>(R_) * C_, -1);
    row_cells_.assign(static_cast<std::size_t>(R_), {});
    col_cells_.assign(static_cast<std::size_t>(C_), {});
    northwest_start();
  }

  TransportPlan solve() {
    const double enter_tol = 1e-11 * cost_scale_;
    const long bland_after = 40L * (R_ + C_) + 200;
    const long max_iter = 2000L + 400L * static_cast<long>(R_ + C_) * (R_ + C_);
    for (long iter = 0;; ++iter) {
      if (iter > max_iter)
        raise(Errc::InvalidArgument, "transport simplex exceeded iteration budget");
      compute_duals();
      int ei = -1, ej = -1;
      double best = -enter_tol;
      bool bland = iter > bland_after;
      for (int i = 0; i < R_; ++i) {
        for (int j = 0; j < C_; ++j) {
          if (basis_pos_[pos(i, j)] >= 0) continue;
          double r = tp_.cost_at(i, j) - u_[static_cast<std::size_t>(i)] -
                     v_[static_cast<std::size_t>(j)];
          if (bland) {
            if (r < -enter_tol) {
              ei = i;
              ej = j;
              break;
            }
          } else if (r < best) {
            best = r;
            ei = i;
            ej = j;
          }
        }
        if (bland && ei >= 0) break;
      }
      if (ei < 0) break;
      pivot(ei, ej);
    }
    return finish();
  }

 private:
  std::size_t pos(int i, int j) const {
    return static_cast<std::size_t>(i) * C_ + static_cast<std::size_t>(j);
  }

  void add_cell(int i, int j, double flow) {
    basis_pos_[pos(i, j)] = static_cast<int>(cells_.size());
    row_cells_[static_cast<std::size_t>(i)].push_back(static_cast<int>(cells_.size()));
    col_cells_[static_cast<std::size_t>(j)].push_back(static_cast<int>(cells_.size()));
    cells_.push_back({i, j, flow});
  }

  void northwest_start() {
    std::vector<double> ra = tp_.supply, rb = tp_.demand;
    int i = 0, j = 0;
    for (;;) {
      double q = std::min(ra[static_cast<std::size_t>(i)], rb[static_cast<std::size_t>(j)]);
      add_cell(i, j, q);
      ra[static_cast<std::size_t>(i)] -= q;
      rb[static_cast<std::size_t>(j)] -= q;
      if (i == R_ - 1 && j == C_ - 1) break;
      if (j == C_ - 1) ++i;
      else if (i == R_ - 1) ++j;
      else if (ra[static_cast<std::size_t>(i)] <= rb[static_cast<std::size_t>(j)]) ++i;
      else ++j;
    }
  }

  void compute_duals() {
    u_.assign(static_cast<std::size_t>(R_), kInf);
    v_.assign(static_cast<std::size_t>(C_), kInf);
    u_[0] = 0.0;
    // propagate over the basis tree; nodes: rows < R_, cols >= R_
    std::vector<int> stack{0};
    while (!stack.empty()) {
      int node = stack.back();
      stack.pop_back();
      if (node < R_) {
        for (int id : row_cells_[static_cast<std::size_t>(node)]) {
          const BasisCell& c = cells_[static_cast<std::size_t>(id)];
          if (std::isinf(v_[static_cast<std::size_t>(c.j)])) {
            v_[static_cast<std::size_t>(c.j)] =
                tp_.cost_at(c.i, c.j) - u_[static_cast<std::size_t>(c.i)];
            stack.push_back(R_ + c.j);
          }
        }
      } else {
        int j = node - R_;
        for (int id : col_cells_[static_cast<std::size_t>(j)]) {
          const BasisCell& c = cells_[static_cast<std::size_t>(id)];
          if (std::isinf(u_[static_cast<std::size_t>(c.i)])) {
            u_[static_cast<std::size_t>(c.i)] =
                tp_.cost_at(c.i, c.j) - v_[static_cast<std::size_t>(c.j)];
            stack.push_back(c.i);
          }
        }
      }
    }
    for (double x : u_)
      if (std::isinf(x)) raise(Errc::InvalidArgument, "transport basis lost connectivity");
    for (double x : v_)
      if (std::isinf(x)) raise(Errc::InvalidArgument, "transport basis lost connectivity");
  }

  // Unique basis-tree path between row `ei` and column `ej`, as cell ids.
  std::vector<int> tree_path(int ei, int ej) {
    int nodes = R_ + C_;
    std::vector<int> parent_cell(static_cast<std::size_t>(nodes), -1);
    std::vector<int> parent_node(static_cast<std::size_t>(nodes), -1);
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(nodes), 0);
    std::vector<int> stack{ei};
    seen[static_cast<std::size_t>(ei)] = 1;
    while (!stack.empty()) {
      int node = stack.back();
      stack.pop_back();
      if (node == R_ + ej) break;
      const auto& ids = node < R_ ? row_cells_[static_cast<std::size_t>(node)]
                                  : col_cells_[static_cast<std::size_t>(node - R_)];
      for (int id : ids) {
        const BasisCell& c = cells_[static_cast<std::size_t>(id)];
        int other = node < R_ ? R_ + c.j : c.i;
        if (!seen[static_cast<std::size_t>(other)]) {
          seen[static_cast<std::size_t>(other)] = 1;
          parent_cell[static_cast<std::size_t>(other)] = id;
          parent_node[static_cast<std::size_t>(other)] = node;
          stack.push_back(other);
        }
      }
    }
    std::vector<int> path;
    int node = R_ + ej;
    if (!seen[static_cast<std::size_t>(node)])
      raise(Errc::InvalidArgument, "transport basis lost connectivity");
    while (node != ei) {
      path.push_back(parent_cell[static_cast<std::size_t>(node)]);
      node = parent_node[static_cast<std::size_t>(node)];
    }
    return path;  // ordered from column ej back to row ei; odd length
  }

  void pivot(int ei, int ej) {
    std::vector<int> path = tree_path(ei, ej);
    // entering cell takes +theta; signs alternate along the path starting
    // with - at the cell incident to column ej
    double theta = kInf;
    int leave = -1;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const BasisCell& c = cells_[static_cast<std::size_t>(path[k])];
      if (c.flow < theta ||
          (c.flow == theta && leave >= 0 &&
           std::pair(c.i, c.j) < std::pair(cells_[static_cast<std::size_t>(leave)].i,
                                           cells_[static_cast<std::size_t>(leave)].j))) {
        theta = c.flow;
        leave = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      BasisCell& c = cells_[static_cast<std::size_t>(path[k])];
      c.flow += (k % 2 == 0) ? -theta : theta;
      if (c.flow < 0) c.flow = 0;  // rounding guard; leaving cell hits 0 exactly
    }
    // swap leaving cell out of the basis, entering in (reuse the slot)
    BasisCell& lc = cells_[static_cast<std::size_t>(leave)];
    basis_pos_[pos(lc.i, lc.j)] = -1;
    auto& lr = row_cells_[static_cast<std::size_t>(lc.i)];
    lr.erase(std::find(lr.begin(), lr.end(), leave));
    auto& lcol = col_cells_[static_cast<std::size_t>(lc.j)];
    lcol.erase(std::find(lcol.begin(), lcol.end(), leave));
    lc = {ei, ej, theta};
    basis_pos_[pos(ei, ej)] = leave;
    row_cells_[static_cast<std::size_t>(ei)].push_back(leave);
    col_cells_[static_cast<std::size_t>(ej)].push_back(leave);
  }

  TransportPlan finish() {
    compute_duals();
    TransportPlan plan;
    plan.flow.assign(static_cast<std::size_t>(R_) * C_, 0.0);
    for (const BasisCell& c : cells_) plan.flow[pos(c.i, c.j)] = c.flow;
    plan.objective = 0;
    for (int i = 0; i < R_; ++i)
      for (int j = 0; j < C_; ++j)
        if (plan.flow[pos(i, j)] != 0.0) plan.objective += tp_.cost_at(i, j) * plan.flow[pos(i, j)];
    plan.row_dual = u_;
    plan.col_dual = v_;
    certify(plan);
    return plan;
  }

  void certify(const TransportPlan& plan) const {
    const double tol = 1e-9 * cost_scale_;
    double total = 0;
    for (double a : tp_.supply) total += a;
    const double feas_tol = 1e-9 * std::max(1.0, total);
    for (int i = 0; i < R_; ++i) {
      double s = 0;
      for (int j = 0; j < C_; ++j) s += plan.flow[pos(i, j)];
      if (std::abs(s - tp_.supply[static_cast<std::size_t>(i)]) > feas_tol)
        raise(Errc::InvalidArgument, "transport certificate: row marginal violated");
    }
    for (int j = 0; j < C_; ++j) {
      double s = 0;
      for (int i = 0; i < R_; ++i) s += plan.flow[pos(i, j)];
      if (std::abs(s - tp_.demand[static_cast<std::size_t>(j)]) > feas_tol)
        raise(Errc::InvalidArgument, "transport certificate: column marginal violated");
    }
    double dual_obj = 0;
    for (int i = 0; i < R_; ++i) dual_obj += plan.row_dual[static_cast<std::size_t>(i)] *
                                             tp_.supply[static_cast<std::size_t>(i)];
    for (int j = 0; j < C_; ++j) dual_obj += plan.col_dual[static_cast<std::size_t>(j)] *
                                             tp_.demand[static_cast<std::size_t>(j)];
    for (int i = 0; i < R_; ++i) {
      for (int j = 0; j < C_; ++j) {
        double f = plan.flow[pos(i, j)];
        if (f < -feas_tol) raise(Errc::InvalidArgument, "transport certificate: negative flow");
        double r = tp_.cost_at(i, j) - plan.row_dual[static_cast<std::size_t>(i)] -
                   plan.col_dual[static_cast<std::size_t>(j)];
        if (r < -tol)
          raise(Errc::InvalidArgument, "transport certificate: dual feasibility violated");
        if (f > 1e-12 * std::max(1.0, total) && std::abs(r) > tol)
          raise(Errc::InvalidArgument, "transport certificate: complementary slackness violated");
      }
    }
    if (std::abs(plan.objective - dual_obj) > 1e-9 * std::max(1.0, std::abs(plan.objective)))
      raise(Errc::InvalidArgument, "transport certificate: duality gap");
  }

  const TransportProblem& tp_;
  int R_, C_;
  double cost_scale_;
  std::vector<BasisCell> cells_;
  std::vector<int> basis_pos_;
  std::vector<std::vector<int>> row_cells_;
  std::vector<std::vector<int>> col_cells_;
  std::vector<double> u_, v_;
};

void validate_problem(const TransportProblem& tp) {
  if (tp.rows() < 1 || tp.cols() < 1) raise(Errc::InvalidArgument, "empty transport side");
  if (tp.cost.size() != static_cast<std::size_t>(tp.rows()) * tp.cols())
    raise(Errc::SizeMismatch, "cost matrix shape");
  double sa = 0, sb = 0;
  for (double a : tp.supply) {
    if (!(a >= 0) || !std::isfinite(a)) raise(Errc::InvalidArgument, "negative supply");
    sa += a;
  }
  for (double b : tp.demand) {
    if (!(b >= 0) || !std::isfinite(b)) raise(Errc::InvalidArgument, "negative demand");
    sb += b;
  }
  if (std::abs(sa - sb) > 1e-9 * std::max(1.0, std::max(sa, sb)))
    raise(Errc::Unbalanced, "supply " + std::to_string(sa) + " != demand " + std::to_string(sb));
  for (double c : tp.cost) {
    if (!std::isfinite(c) || c < 0) raise(Errc::InvalidArgument, "costs must be finite and >= 0");
  }
}

}  // namespace

TransportPlan solve_transport(const TransportProblem& tp) {
  validate_problem(tp);
  TransportSimplex simplex(tp);
  return simplex.solve();
}

double exact_w1(const TransportProblem& tp) { return solve_transport(tp).objective; }

std::vector<std::vector<double>> all_pairs_distances(const WeightedGraph& g, int threads) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(g.node_count()));
  parallel_for(g.node_count(), threads, [&](std::int64_t s) {
    rows[static_cast<std::size_t>(s)] =
        dijkstra_distances(g, static_cast<NodeId>(s)).dist;
  });
  return rows;
}

double exact_w1(const std::vector<std::vector<double>>& metric_rows, const DiscreteMeasure& mu,
                const DiscreteMeasure& nu) {
  TransportProblem tp;
  tp.supply = mu.mass;
  tp.demand = nu.mass;
  tp.cost.resize(mu.support.size() * nu.support.size());
  for (std::size_t i = 0; i < mu.support.size(); ++i) {
    const auto& row = metric_rows[static_cast<std::size_t>(mu.support[i])];
    for (std::size_t j = 0; j < nu.support.size(); ++j) {
      double c = row[static_cast<std::size_t>(nu.support[j])];
      if (!std::isfinite(c))
        raise(Errc::DisconnectedGraph, "supports not mutually reachable");
      tp.cost[i * nu.support.size() + j] = c;
    }
  }
  return exact_w1(tp);
}

double orc_edge(const WeightedGraph& g, const DiscreteMeasure& mu_x, const DiscreteMeasure& mu_y,
                NodeId x, NodeId y) {
  g.require_node(x, "orc_edge");
  g.require_node(y, "orc_edge");
  if (x == y) raise(Errc::SameNode, "curvature of a pair needs x != y");
  TransportProblem tp;
  tp.supply = mu_x.mass;
  tp.demand = mu_y.mass;
  tp.cost.resize(mu_x.support.size() * mu_y.support.size());
  double dxy = kInf;
  for (std::size_t i = 0; i < mu_x.support.size(); ++i) {
    PathMetric pm = dijkstra_distances(g, mu_x.support[i]);
    for (std::size_t j = 0; j < mu_y.support.size(); ++j) {
      double c = pm.dist[static_cast<std::size_t>(mu_y.support[j])];
      if (!std::isfinite(c))
        raise(Errc::DisconnectedGraph, "supports not mutually reachable");
      tp.cost[i * mu_y.support.size() + j] = c;
    }
    if (mu_x.support[i] == x) dxy = pm.dist[static_cast<std::size_t>(y)];
  }
  if (std::isinf(dxy)) dxy = dijkstra_distances(g, x).dist[static_cast<std::size_t>(y)];
  if (!std::isfinite(dxy) || dxy <= 0) raise(Errc::DisconnectedGraph, "x cannot reach y");
  return 1.0 - exact_w1(tp) / dxy;
}

FieldDetail orc_field_detail(const WeightedGraph& g, const MeasureSpec& measure_spec,
                             const PointCloud* cloud, int threads,
                             const std::vector<std::vector<double>>* metric_rows) {
  g.require_connected("orc_field");
  std::vector<std::vector<double>> local_rows;
  if (metric_rows == nullptr) {
    local_rows = all_pairs_distances(g, threads);
    metric_rows = &local_rows;
  }
  int n = g.node_count();
  std::vector<DiscreteMeasure> mus(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> degenerate(static_cast<std::size_t>(n), 0);
  parallel_for(n, threads, [&](std::int64_t vtx) {
    bool deg = false;
    mus[static_cast<std::size_t>(vtx)] =
        make_measure(g, cloud, measure_spec, static_cast<NodeId>(vtx), &deg);
    degenerate[static_cast<std::size_t>(vtx)] = deg ? 1 : 0;
  });

  FieldDetail out;
  out.field.method = "ORC";
  out.field.p = 1.0;
  out.field.measure = measure_spec;
  int m = g.edge_count();
  out.field.kappa.assign(static_cast<std::size_t>(m), 0.0);
  out.s.assign(static_cast<std::size_t>(m), 0.0);
  out.d.assign(static_cast<std::size_t>(m), 0.0);
  parallel_for(m, threads, [&](std::int64_t id) {
    const Edge& e = g.edge(static_cast<int>(id));
    double w1 = exact_w1(*metric_rows, mus[static_cast<std::size_t>(e.u)],
                         mus[static_cast<std::size_t>(e.v)]);
    double d = (*metric_rows)[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)];
    out.s[static_cast<std::size_t>(id)] = w1;
    out.d[static_cast<std::size_t>(id)] = d;
    out.field.kappa[static_cast<std::size_t>(id)] = 1.0 - w1 / d;
  });
  for (std::uint8_t f : degenerate) out.degenerate_measures += f;
  return out;
}

CurvatureField orc_field(const WeightedGraph& g, const MeasureSpec& measure_spec,
                         const PointCloud* cloud, int threads) {
  return orc_field_detail(g, measure_spec, cloud, threads).field;
}

}  // namespace ricci
