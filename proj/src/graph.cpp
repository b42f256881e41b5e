#include "ricci/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <random>

namespace ricci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];  // path halving
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);  // deterministic representative
    parent[b] = a;
    return true;
  }
};

}  // namespace

WeightedGraph WeightedGraph::build(std::span<const EdgeSpec> edges) {
  NodeId max_id = -1;
  for (const auto& e : edges) max_id = std::max({max_id, e.u, e.v});
  return build(static_cast<int>(max_id) + 1, edges);
}

WeightedGraph WeightedGraph::build(int node_count, std::span<const EdgeSpec> edges) {
  if (node_count < 0) raise(Errc::InvalidArgument, "negative node count");
  WeightedGraph g;
  g.n_ = node_count;
  g.edges_.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count)
      raise(Errc::UnknownNode, "edge endpoint out of range: (" + std::to_string(e.u) + ", " +
                                   std::to_string(e.v) + ")");
    if (e.u == e.v) raise(Errc::SelfLoop, "self loop at node " + std::to_string(e.u));
    if (!(e.length > 0))
      raise(Errc::NonPositiveLength, "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                         ") has length " + std::to_string(e.length));
    g.edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.length});
  }
  std::sort(g.edges_.begin(), g.edges_.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < g.edges_.size(); ++i) {
    if (g.edges_[i].u == g.edges_[i - 1].u && g.edges_[i].v == g.edges_[i - 1].v)
      raise(Errc::DuplicateEdge, "duplicate edge (" + std::to_string(g.edges_[i].u) + ", " +
                                     std::to_string(g.edges_[i].v) + ")");
  }

  g.adj_.assign(static_cast<std::size_t>(node_count), {});
  for (std::size_t id = 0; id < g.edges_.size(); ++id) {
    const Edge& e = g.edges_[id];
    g.adj_[static_cast<std::size_t>(e.u)].push_back({e.v, static_cast<std::int32_t>(id)});
    g.adj_[static_cast<std::size_t>(e.v)].push_back({e.u, static_cast<std::int32_t>(id)});
    g.total_length_ += e.length;
  }
  for (auto& nbrs : g.adj_)
    std::sort(nbrs.begin(), nbrs.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });

  // connectivity by BFS from node 0
  if (node_count > 1) {
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(node_count), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    int visited = 1;
    while (!stack.empty()) {
      NodeId x = stack.back();
      stack.pop_back();
      for (const auto& nb : g.adj_[static_cast<std::size_t>(x)]) {
        if (!seen[static_cast<std::size_t>(nb.node)]) {
          seen[static_cast<std::size_t>(nb.node)] = 1;
          ++visited;
          stack.push_back(nb.node);
        }
      }
    }
    g.connected_ = visited == node_count;
  }
  return g;
}

int WeightedGraph::edge_between(NodeId u, NodeId v) const {
  require_node(u, "edge_between");
  require_node(v, "edge_between");
  const auto& nbrs = adj_[static_cast<std::size_t>(u)];
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                             [](const Neighbor& a, NodeId b) { return a.node < b; });
  if (it != nbrs.end() && it->node == v) return it->edge;
  return -1;
}

WeightedGraph WeightedGraph::with_lengths(std::span<const double> lengths) const {
  if (lengths.size() != edges_.size())
    raise(Errc::SizeMismatch, "expected " + std::to_string(edges_.size()) + " lengths, got " +
                                  std::to_string(lengths.size()));
  WeightedGraph g = *this;
  g.total_length_ = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!(lengths[i] > 0))
      raise(Errc::NonPositiveLength, "length " + std::to_string(lengths[i]) + " at edge " +
                                         std::to_string(i));
    g.edges_[i].length = lengths[i];
    g.total_length_ += lengths[i];
  }
  return g;
}

WeightedGraph WeightedGraph::without_edges(std::span<const std::uint8_t> removed) const {
  if (removed.size() != edges_.size()) raise(Errc::SizeMismatch, "mask size != edge count");
  std::vector<EdgeSpec> kept;
  kept.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (!removed[i]) kept.push_back({edges_[i].u, edges_[i].v, edges_[i].length});
  return build(n_, kept);
}

void WeightedGraph::require_node(NodeId v, const char* what) const {
  if (v < 0 || v >= n_)
    raise(Errc::UnknownNode, std::string(what) + ": node " + std::to_string(v) +
                                 " not in [0, " + std::to_string(n_) + ")");
}

void WeightedGraph::require_connected(const char* what) const {
  if (!connected_) raise(Errc::DisconnectedGraph, std::string(what) + " needs a connected graph");
}

NodeId RootedTree::lca(NodeId u, NodeId v) const {
  while (depth_[static_cast<std::size_t>(u)] > depth_[static_cast<std::size_t>(v)])
    u = parent_[static_cast<std::size_t>(u)];
  while (depth_[static_cast<std::size_t>(v)] > depth_[static_cast<std::size_t>(u)])
    v = parent_[static_cast<std::size_t>(v)];
  while (u != v) {
    u = parent_[static_cast<std::size_t>(u)];
    v = parent_[static_cast<std::size_t>(v)];
  }
  return u;
}

double RootedTree::path_length(NodeId u, NodeId v) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_)
    raise(Errc::UnknownNode, "path_length: node out of range");
  NodeId a = lca(u, v);
  return dist_root_[static_cast<std::size_t>(u)] + dist_root_[static_cast<std::size_t>(v)] -
         2.0 * dist_root_[static_cast<std::size_t>(a)];
}

std::vector<std::pair<NodeId, NodeId>> RootedTree::edge_set() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(static_cast<std::size_t>(n_ > 0 ? n_ - 1 : 0));
  for (NodeId c = 0; c < n_; ++c) {
    if (c == root_) continue;
    NodeId p = parent_[static_cast<std::size_t>(c)];
    out.emplace_back(std::min(p, c), std::max(p, c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

RootedTree root_tree(int node_count, std::span<const EdgeSpec> edges, NodeId root) {
  if (node_count <= 0) raise(Errc::InvalidArgument, "root_tree: empty node set");
  if (root < 0 || root >= node_count) raise(Errc::UnknownNode, "root_tree: root out of range");
  if (static_cast<int>(edges.size()) != node_count - 1)
    raise(Errc::NotATree, "expected " + std::to_string(node_count - 1) + " edges, got " +
                              std::to_string(edges.size()));

  std::vector<std::vector<std::pair<NodeId, double>>> adj(static_cast<std::size_t>(node_count));
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count)
      raise(Errc::UnknownNode, "root_tree: endpoint out of range");
    if (e.u == e.v) raise(Errc::NotATree, "self loop at node " + std::to_string(e.u));
    if (!(e.length > 0)) raise(Errc::NonPositiveLength, "tree edge with non-positive length");
    adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.length);
    adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.length);
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());  // ascending child order

  RootedTree t;
  t.n_ = node_count;
  t.root_ = root;
  t.parent_.assign(static_cast<std::size_t>(node_count), -1);
  t.parent_len_.assign(static_cast<std::size_t>(node_count), 0.0);
  t.depth_.assign(static_cast<std::size_t>(node_count), 0);
  t.dist_root_.assign(static_cast<std::size_t>(node_count), 0.0);
  t.dfs_in_.assign(static_cast<std::size_t>(node_count), -1);
  t.dfs_out_.assign(static_cast<std::size_t>(node_count), -1);

  // Iterative DFS; (node, next-child cursor) pairs.
  std::vector<std::pair<NodeId, std::size_t>> stack;
  stack.reserve(static_cast<std::size_t>(node_count));
  int clock = 0;
  t.parent_[static_cast<std::size_t>(root)] = root;
  t.dfs_in_[static_cast<std::size_t>(root)] = clock++;
  stack.emplace_back(root, 0);
  int visited = 1;
  while (!stack.empty()) {
    auto& [x, cursor] = stack.back();
    const auto& nbrs = adj[static_cast<std::size_t>(x)];
    bool descended = false;
    while (cursor < nbrs.size()) {
      auto [y, len] = nbrs[cursor++];
      if (y == t.parent_[static_cast<std::size_t>(x)] && !(x == root && y == root)) continue;
      if (t.dfs_in_[static_cast<std::size_t>(y)] != -1)
        raise(Errc::NotATree, "cycle through node " + std::to_string(y));
      t.parent_[static_cast<std::size_t>(y)] = x;
      t.parent_len_[static_cast<std::size_t>(y)] = len;
      t.depth_[static_cast<std::size_t>(y)] = t.depth_[static_cast<std::size_t>(x)] + 1;
      t.dist_root_[static_cast<std::size_t>(y)] =
          t.dist_root_[static_cast<std::size_t>(x)] + len;
      t.dfs_in_[static_cast<std::size_t>(y)] = clock++;
      stack.emplace_back(y, 0);
      ++visited;
      descended = true;
      break;
    }
    if (!descended) {
      t.dfs_out_[static_cast<std::size_t>(x)] = clock;
      stack.pop_back();
    }
  }
  if (visited != node_count) raise(Errc::NotATree, "tree does not span all nodes");
  for (double d : t.dist_root_) t.height_ = std::max(t.height_, d);
  return t;
}

namespace {

// Shared Dijkstra. When `parent`/`parent_edge` are non-null, builds the
// shortest-path tree with the smallest-id rule on equal-distance ties.
void dijkstra_impl(const WeightedGraph& g, NodeId source, std::vector<double>& dist,
                   std::vector<NodeId>* parent, std::vector<int>* parent_edge,
                   std::span<const std::uint8_t> removed, NodeId stop_at) {
  int n = g.node_count();
  dist.assign(static_cast<std::size_t>(n), kInf);
  if (parent) parent->assign(static_cast<std::size_t>(n), -1);
  if (parent_edge) parent_edge->assign(static_cast<std::size_t>(n), -1);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[static_cast<std::size_t>(source)] = 0;
  heap.emplace(0.0, source);
  std::vector<std::uint8_t> done(static_cast<std::size_t>(n), 0);
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (done[static_cast<std::size_t>(x)]) continue;
    done[static_cast<std::size_t>(x)] = 1;
    if (x == stop_at) return;
    for (const auto& nb : g.neighbors(x)) {
      if (!removed.empty() && removed[static_cast<std::size_t>(nb.edge)]) continue;
      double nd = d + g.length(nb.edge);
      double& dv = dist[static_cast<std::size_t>(nb.node)];
      if (nd < dv) {
        dv = nd;
        if (parent) (*parent)[static_cast<std::size_t>(nb.node)] = x;
        if (parent_edge) (*parent_edge)[static_cast<std::size_t>(nb.node)] = nb.edge;
        heap.emplace(nd, nb.node);
      } else if (parent && nd == dv && x < (*parent)[static_cast<std::size_t>(nb.node)]) {
        (*parent)[static_cast<std::size_t>(nb.node)] = x;
        (*parent_edge)[static_cast<std::size_t>(nb.node)] = nb.edge;
      }
    }
  }
}

}  // namespace

PathMetric dijkstra_distances(const WeightedGraph& g, NodeId source) {
  g.require_node(source, "dijkstra");
  PathMetric m;
  m.source = source;
  dijkstra_impl(g, source, m.dist, nullptr, nullptr, {}, -1);
  return m;
}

SptResult dijkstra(const WeightedGraph& g, NodeId source) {
  g.require_node(source, "dijkstra");
  g.require_connected("dijkstra");
  SptResult r;
  r.metric.source = source;
  std::vector<NodeId> parent;
  std::vector<int> parent_edge;
  dijkstra_impl(g, source, r.metric.dist, &parent, &parent_edge, {}, -1);
  std::vector<EdgeSpec> tree_edges;
  tree_edges.reserve(static_cast<std::size_t>(g.node_count() - 1));
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (v == source) continue;
    tree_edges.push_back({parent[static_cast<std::size_t>(v)], v,
                          g.length(parent_edge[static_cast<std::size_t>(v)])});
  }
  r.tree = root_tree(g.node_count(), tree_edges, source);
  return r;
}

std::vector<int> kruskal_mst(const WeightedGraph& g) {
  g.require_connected("kruskal_mst");
  std::vector<int> order(static_cast<std::size_t>(g.edge_count()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  // edges() is sorted by (u, v); a stable sort on length yields the
  // (length, min id, max id) scan order.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return g.length(a) < g.length(b);
  });
  UnionFind uf(g.node_count());
  std::vector<int> picked;
  picked.reserve(static_cast<std::size_t>(g.node_count() > 0 ? g.node_count() - 1 : 0));
  for (int id : order) {
    const Edge& e = g.edge(id);
    if (uf.unite(e.u, e.v)) picked.push_back(id);
  }
  if (static_cast<int>(picked.size()) != std::max(0, g.node_count() - 1))
    raise(Errc::DisconnectedGraph, "kruskal_mst: graph not spanning");
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::vector<int> random_spanning_tree(const WeightedGraph& g, std::uint64_t seed) {
  g.require_connected("random_spanning_tree");
  std::vector<int> order(static_cast<std::size_t>(g.edge_count()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  // Manual Fisher-Yates so the permutation depends only on the seed.
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  UnionFind uf(g.node_count());
  std::vector<int> picked;
  picked.reserve(static_cast<std::size_t>(g.node_count() > 0 ? g.node_count() - 1 : 0));
  for (int id : order) {
    const Edge& e = g.edge(id);
    if (uf.unite(e.u, e.v)) picked.push_back(id);
  }
  if (static_cast<int>(picked.size()) != std::max(0, g.node_count() - 1))
    raise(Errc::DisconnectedGraph, "random_spanning_tree: graph not spanning");
  std::sort(picked.begin(), picked.end());
  return picked;
}

RootedTree root_tree_from_ids(const WeightedGraph& g, std::span<const int> edge_ids, NodeId root) {
  std::vector<EdgeSpec> es;
  es.reserve(edge_ids.size());
  for (int id : edge_ids) {
    const Edge& e = g.edge(id);
    es.push_back({e.u, e.v, e.length});
  }
  return root_tree(g.node_count(), es, root);
}

double shortest_path_avoiding(const WeightedGraph& g, NodeId u, NodeId v,
                              std::span<const std::uint8_t> removed) {
  g.require_node(u, "shortest_path_avoiding");
  g.require_node(v, "shortest_path_avoiding");
  std::vector<double> dist;
  dijkstra_impl(g, u, dist, nullptr, nullptr, removed, v);
  return dist[static_cast<std::size_t>(v)];
}

}  // namespace ricci
