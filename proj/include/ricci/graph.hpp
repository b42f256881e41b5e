#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ricci/error.hpp"

namespace ricci {

using NodeId = std::int32_t;

/// Input edge triple; endpoints may come in either order.
struct EdgeSpec {
  NodeId u = 0;
  NodeId v = 0;
  double length = 1.0;
};

/// Stored undirected edge, normalized so that u < v.
struct Edge {
  NodeId u;
  NodeId v;
  double length;
};

/// Undirected graph with strictly positive edge lengths and dense node ids
/// 0..n-1. Immutable after construction; concurrent reads are safe.
///
/// Edges are kept sorted by (u, v); the position in edges() is the edge id
/// used everywhere else (curvature fields, flow weights, pruning masks).
class WeightedGraph {
 public:
  struct Neighbor {
    NodeId node;
    std::int32_t edge;  // id into edges()
  };

  WeightedGraph() = default;

  /// Node count inferred as max endpoint + 1.
  static WeightedGraph build(std::span<const EdgeSpec> edges);
  /// Explicit node count (allows trailing isolated nodes); must cover all ids.
  static WeightedGraph build(int node_count, std::span<const EdgeSpec> edges);

  static WeightedGraph build(std::initializer_list<EdgeSpec> edges) {
    return build(std::span<const EdgeSpec>(edges.begin(), edges.size()));
  }
  static WeightedGraph build(int node_count, std::initializer_list<EdgeSpec> edges) {
    return build(node_count, std::span<const EdgeSpec>(edges.begin(), edges.size()));
  }

  int node_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }
  double length(int id) const { return edges_[static_cast<std::size_t>(id)].length; }
  const std::vector<Neighbor>& neighbors(NodeId v) const {
    return adj_[static_cast<std::size_t>(v)];
  }
  int degree(NodeId v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
  bool connected() const { return connected_; }
  double total_length() const { return total_length_; }

  /// Edge id joining u and v, or -1 when absent.
  int edge_between(NodeId u, NodeId v) const;

  /// Copy of this graph with edge lengths replaced (same edge ids).
  WeightedGraph with_lengths(std::span<const double> lengths) const;

  /// Copy with the masked edges dropped (mask aligned with edges()).
  WeightedGraph without_edges(std::span<const std::uint8_t> removed) const;

  void require_node(NodeId v, const char* what) const;
  void require_connected(const char* what) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adj_;
  bool connected_ = true;
  double total_length_ = 0;
};

/// Single-source shortest-path distances; unreachable nodes hold +inf.
struct PathMetric {
  NodeId source = 0;
  std::vector<double> dist;
};

/// Tree rooted at `root` with parent pointers and DFS intervals.
///
/// Tree edges are identified by their child endpoint: for every c != root
/// there is one edge (parent(c), c) of length parent_length(c). A node v
/// lies in the subtree under c iff
///   dfs_in(c) <= dfs_in(v) < dfs_out(c),
/// where intervals come from a DFS that visits children in ascending id
/// order. All queries are const and safe to share across threads.
class RootedTree {
 public:
  RootedTree() = default;

  NodeId root() const { return root_; }
  int node_count() const { return n_; }
  NodeId parent(NodeId v) const { return parent_[static_cast<std::size_t>(v)]; }
  double parent_length(NodeId v) const { return parent_len_[static_cast<std::size_t>(v)]; }
  int depth(NodeId v) const { return depth_[static_cast<std::size_t>(v)]; }
  double dist_to_root(NodeId v) const { return dist_root_[static_cast<std::size_t>(v)]; }
  int dfs_in(NodeId v) const { return dfs_in_[static_cast<std::size_t>(v)]; }
  int dfs_out(NodeId v) const { return dfs_out_[static_cast<std::size_t>(v)]; }
  double height() const { return height_; }

  bool in_subtree(NodeId c, NodeId v) const {
    return dfs_in_[static_cast<std::size_t>(c)] <= dfs_in_[static_cast<std::size_t>(v)] &&
           dfs_in_[static_cast<std::size_t>(v)] < dfs_out_[static_cast<std::size_t>(c)];
  }

  NodeId lca(NodeId u, NodeId v) const;
  /// Sum of edge lengths on the unique tree path between u and v.
  double path_length(NodeId u, NodeId v) const;

  /// Canonical (min, max) endpoint pairs of the tree edges, sorted.
  std::vector<std::pair<NodeId, NodeId>> edge_set() const;

  friend RootedTree root_tree(int node_count, std::span<const EdgeSpec> edges, NodeId root);

 private:
  int n_ = 0;
  NodeId root_ = 0;
  std::vector<NodeId> parent_;
  std::vector<double> parent_len_;
  std::vector<int> depth_;
  std::vector<double> dist_root_;
  std::vector<int> dfs_in_;
  std::vector<int> dfs_out_;
  double height_ = 0;
};

/// Orients an undirected tree (exactly n-1 edges, spanning, acyclic) at
/// `root`, assigning DFS intervals with children visited in ascending id.
RootedTree root_tree(int node_count, std::span<const EdgeSpec> edges, NodeId root);

inline RootedTree root_tree(int node_count, std::initializer_list<EdgeSpec> edges, NodeId root) {
  return root_tree(node_count, std::span<const EdgeSpec>(edges.begin(), edges.size()), root);
}

/// Shortest-path distances from `source` (Dijkstra, binary heap).
PathMetric dijkstra_distances(const WeightedGraph& g, NodeId source);

struct SptResult {
  PathMetric metric;
  RootedTree tree;
};

/// Shortest-path tree from `source`. Among equal-distance predecessors the
/// smallest node id wins, which makes the tree unique. Requires a connected
/// graph.
SptResult dijkstra(const WeightedGraph& g, NodeId source);

/// Minimum spanning tree edge ids (Kruskal). Edges are scanned in
/// (length, min id, max id) order, so the result is deterministic even with
/// repeated lengths. Requires a connected graph.
std::vector<int> kruskal_mst(const WeightedGraph& g);

/// Spanning tree from a seeded random edge order (Fisher-Yates on the edge
/// list, then union-find acceptance). Same seed, same tree.
std::vector<int> random_spanning_tree(const WeightedGraph& g, std::uint64_t seed);

/// Builds a RootedTree from edge ids of g (e.g. a kruskal_mst result).
RootedTree root_tree_from_ids(const WeightedGraph& g, std::span<const int> edge_ids, NodeId root);

/// Shortest u-v distance ignoring edges flagged in `removed` (aligned with
/// g.edges()); +inf when no path survives.
double shortest_path_avoiding(const WeightedGraph& g, NodeId u, NodeId v,
                              std::span<const std::uint8_t> removed);

}  // namespace ricci
