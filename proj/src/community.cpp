#include "ricci/community.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace ricci {

int Partition::community_count() const {
  int mx = -1;
  for (int l : label) mx = std::max(mx, l);
  return mx + 1;
}

Partition Partition::canonical(std::vector<int> raw) {
  std::vector<int> remap;
  std::map<int, int> seen;
  for (int& l : raw) {
    auto [it, fresh] = seen.emplace(l, static_cast<int>(seen.size()));
    l = it->second;
    (void)fresh;
  }
  return Partition{std::move(raw)};
}

double modularity(const WeightedGraph& g, std::span<const double> weights, const Partition& part,
                  double resolution) {
  if (weights.size() != static_cast<std::size_t>(g.edge_count()))
    raise(Errc::SizeMismatch, "weights do not match edge count");
  if (part.label.size() != static_cast<std::size_t>(g.node_count()))
    raise(Errc::SizeMismatch, "partition does not match node count");
  double m = 0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) raise(Errc::InvalidArgument, "negative edge weight");
    m += w;
  }
  if (!(m > 0)) raise(Errc::InvalidArgument, "total weight must be positive");
  double internal = 0;
  std::vector<double> k_comm(part.label.size(), 0.0);
  int ncomm = 0;
  for (int l : part.label) {
    if (l < 0) raise(Errc::InvalidArgument, "negative community label");
    ncomm = std::max(ncomm, l + 1);
  }
  k_comm.assign(static_cast<std::size_t>(ncomm), 0.0);
  for (int id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    double w = weights[static_cast<std::size_t>(id)];
    int cu = part.label[static_cast<std::size_t>(e.u)];
    int cv = part.label[static_cast<std::size_t>(e.v)];
    if (cu == cv) internal += w;
    k_comm[static_cast<std::size_t>(cu)] += w;
    k_comm[static_cast<std::size_t>(cv)] += w;
  }
  double q = internal / m;
  for (double kc : k_comm) {
    double frac = kc / (2.0 * m);
    q -= resolution * frac * frac;
  }
  return q;
}

namespace {

// Working graph for one coarsening level. self_w holds collapsed internal
// weight (counted once); weighted degree k includes it twice.
struct LevelGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;  // no self entries
  std::vector<double> self_w;
  std::vector<double> k;
  double m2 = 0;  // 2m
};

// One sweep-until-stable pass of local moves. Returns community labels
// (not dense) and whether anything moved.
bool local_moves(const LevelGraph& lg, double resolution, std::mt19937_64& rng,
                 std::vector<int>& comm) {
  int n = lg.n;
  comm.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) comm[static_cast<std::size_t>(i)] = i;
  std::vector<double> k_tot(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) k_tot[static_cast<std::size_t>(i)] = lg.k[static_cast<std::size_t>(i)];

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);

  bool any_move = false;
  bool moved = true;
  std::vector<double> w_to(static_cast<std::size_t>(n), 0.0);
  while (moved) {
    moved = false;
    for (int x : order) {
      int old_c = comm[static_cast<std::size_t>(x)];
      double kx = lg.k[static_cast<std::size_t>(x)];
      k_tot[static_cast<std::size_t>(old_c)] -= kx;

      std::vector<int> cands;
      for (const auto& [y, w] : lg.adj[static_cast<std::size_t>(x)]) {
        int c = comm[static_cast<std::size_t>(y)];
        if (w_to[static_cast<std::size_t>(c)] == 0.0) cands.push_back(c);
        w_to[static_cast<std::size_t>(c)] += w;
      }
      if (std::find(cands.begin(), cands.end(), old_c) == cands.end()) cands.push_back(old_c);
      std::sort(cands.begin(), cands.end());

      auto gain = [&](int c) {
        return w_to[static_cast<std::size_t>(c)] -
               resolution * kx * k_tot[static_cast<std::size_t>(c)] / lg.m2;
      };
      int best = old_c;
      double best_gain = gain(old_c);
      for (int c : cands) {
        double gn = gain(c);
        if (gn > best_gain + 1e-12) {
          best = c;
          best_gain = gn;
        }
      }
      for (int c : cands) w_to[static_cast<std::size_t>(c)] = 0.0;

      comm[static_cast<std::size_t>(x)] = best;
      k_tot[static_cast<std::size_t>(best)] += kx;
      if (best != old_c) {
        moved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<int>& dense_comm, int ncomm) {
  LevelGraph out;
  out.n = ncomm;
  out.adj.assign(static_cast<std::size_t>(ncomm), {});
  out.self_w.assign(static_cast<std::size_t>(ncomm), 0.0);
  std::map<std::pair<int, int>, double> acc;
  for (int x = 0; x < lg.n; ++x) {
    int cx = dense_comm[static_cast<std::size_t>(x)];
    out.self_w[static_cast<std::size_t>(cx)] += lg.self_w[static_cast<std::size_t>(x)];
    for (const auto& [y, w] : lg.adj[static_cast<std::size_t>(x)]) {
      if (y < x) continue;  // each undirected pair once
      int cy = dense_comm[static_cast<std::size_t>(y)];
      if (cx == cy) {
        out.self_w[static_cast<std::size_t>(cx)] += w;
      } else {
        acc[{std::min(cx, cy), std::max(cx, cy)}] += w;
      }
    }
  }
  for (const auto& [uv, w] : acc) {
    out.adj[static_cast<std::size_t>(uv.first)].emplace_back(uv.second, w);
    out.adj[static_cast<std::size_t>(uv.second)].emplace_back(uv.first, w);
  }
  out.k.assign(static_cast<std::size_t>(ncomm), 0.0);
  for (int i = 0; i < ncomm; ++i) {
    double kk = 2.0 * out.self_w[static_cast<std::size_t>(i)];
    for (const auto& [y, w] : out.adj[static_cast<std::size_t>(i)]) {
      (void)y;
      kk += w;
    }
    out.k[static_cast<std::size_t>(i)] = kk;
    out.m2 += kk;
  }
  return out;
}

}  // namespace

Partition louvain(const WeightedGraph& g, std::span<const double> weights, double resolution,
                  std::uint64_t seed) {
  if (weights.size() != static_cast<std::size_t>(g.edge_count()))
    raise(Errc::SizeMismatch, "weights do not match edge count");
  int n = g.node_count();
  if (n == 0) return Partition{{}};
  double m = 0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) raise(Errc::InvalidArgument, "negative edge weight");
    m += w;
  }
  if (!(m > 0)) raise(Errc::InvalidArgument, "total weight must be positive");

  LevelGraph lg;
  lg.n = n;
  lg.adj.assign(static_cast<std::size_t>(n), {});
  lg.self_w.assign(static_cast<std::size_t>(n), 0.0);
  lg.k.assign(static_cast<std::size_t>(n), 0.0);
  for (int id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    double w = weights[static_cast<std::size_t>(id)];
    lg.adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, w);
    lg.adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, w);
    lg.k[static_cast<std::size_t>(e.u)] += w;
    lg.k[static_cast<std::size_t>(e.v)] += w;
  }
  lg.m2 = 2.0 * m;

  std::mt19937_64 rng(seed);
  std::vector<int> node_comm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) node_comm[static_cast<std::size_t>(i)] = i;

  for (;;) {
    std::vector<int> comm;
    bool any = local_moves(lg, resolution, rng, comm);
    if (!any) break;

    // densify level communities
    std::vector<int> dense(static_cast<std::size_t>(lg.n));
    std::map<int, int> remap;
    for (int i = 0; i < lg.n; ++i) {
      auto [it, fresh] = remap.emplace(comm[static_cast<std::size_t>(i)],
                                       static_cast<int>(remap.size()));
      dense[static_cast<std::size_t>(i)] = it->second;
      (void)fresh;
    }
    for (int i = 0; i < n; ++i)
      node_comm[static_cast<std::size_t>(i)] =
          dense[static_cast<std::size_t>(node_comm[static_cast<std::size_t>(i)])];
    int ncomm = static_cast<int>(remap.size());
    if (ncomm == lg.n) break;  // nothing coarsened
    lg = aggregate(lg, dense, ncomm);
  }
  return Partition::canonical(std::move(node_comm));
}

double ari(const Partition& a, const Partition& b) {
  if (a.label.size() != b.label.size())
    raise(Errc::SizeMismatch, "partitions cover different node sets");
  std::size_t n = a.label.size();
  if (n == 0) raise(Errc::InvalidArgument, "empty partitions");
  std::map<std::pair<int, int>, double> cont;
  std::map<int, double> ra, rb;
  for (std::size_t i = 0; i < n; ++i) {
    cont[{a.label[i], b.label[i]}] += 1;
    ra[a.label[i]] += 1;
    rb[b.label[i]] += 1;
  }
  auto choose2 = [](double x) { return x * (x - 1) / 2.0; };
  double sum_ij = 0, sum_a = 0, sum_b = 0;
  for (const auto& [k, v] : cont) {
    (void)k;
    sum_ij += choose2(v);
  }
  for (const auto& [k, v] : ra) {
    (void)k;
    sum_a += choose2(v);
  }
  for (const auto& [k, v] : rb) {
    (void)k;
    sum_b += choose2(v);
  }
  double total = choose2(static_cast<double>(n));
  double expected = sum_a * sum_b / total;
  double max_index = (sum_a + sum_b) / 2.0;
  if (max_index == expected) return 1.0;  // both partitions trivial and equal
  return (sum_ij - expected) / (max_index - expected);
}

}  // namespace ricci
