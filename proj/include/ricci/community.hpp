#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ricci/graph.hpp"

namespace ricci {

/// Node-to-community assignment; labels are dense 0..K-1, numbered by
/// first appearance in node-id order.
struct Partition {
  std::vector<int> label;

  int community_count() const;
  static Partition canonical(std::vector<int> raw);
};

/// Modularity of a partition under per-edge similarity weights (aligned
/// with g.edges()):
///   Q = sum_C [ w_in(C)/m - resolution * (K_C / 2m)^2 ],
/// m the total weight, K_C the weighted degree of C.
double modularity(const WeightedGraph& g, std::span<const double> weights,
                  const Partition& part, double resolution = 1.0);

/// Greedy Louvain: seeded sweep order, local moves to the best-gain
/// neighbor community until stable, then coarsening, repeated until no
/// move improves modularity. Deterministic for a fixed seed.
Partition louvain(const WeightedGraph& g, std::span<const double> weights,
                  double resolution = 1.0, std::uint64_t seed = 0);

/// Adjusted Rand index between two partitions of the same node set
/// (1 = identical up to relabeling, ~0 = independent).
double ari(const Partition& a, const Partition& b);

}  // namespace ricci
