#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ricci/graph.hpp"
#include "ricci/measure.hpp"

namespace ricci {

/// Cut masses of a measure on a rooted tree, indexed by the child endpoint
/// of each tree edge: value[i] is the total mass in the subtree hanging
/// below child[i]. Entries are sparse (nonzero only), sorted by child id.
struct CutMassVector {
  std::vector<NodeId> child;
  std::vector<double> value;
};

/// Cut masses via parent-pointer aggregation: each support point pushes its
/// mass up the root path, O(|support| * depth).
CutMassVector cut_mass(const RootedTree& tree, const DiscreteMeasure& mu);

/// Dense variant (one slot per node, root slot unused); used by the
/// complexity benchmark to contrast the sparse path.
std::vector<double> cut_mass_dense(const RootedTree& tree, const DiscreteMeasure& mu);

/// Sobolev transport distance of order p >= 1 between two measures given
/// their cut-mass vectors on a shared tree:
///   S_p(mu, nu)^p = sum_e lambda(e) |F_mu(e) - F_nu(e)|^p.
double sobolev_distance(const RootedTree& tree, const CutMassVector& a, const CutMassVector& b,
                        double p);
double sobolev_distance(const RootedTree& tree, const DiscreteMeasure& mu,
                        const DiscreteMeasure& nu, double p);
double sobolev_distance_dense(const RootedTree& tree, const std::vector<double>& a,
                              const std::vector<double>& b, double p);

/// Base distance D_p(x, y) = S_p(dirac_x, dirac_y) = (tree path length)^(1/p).
double dirac_distance(const RootedTree& tree, NodeId x, NodeId y, double p);

/// Curvature of the pair (x, y) under measures mu_x, mu_y:
///   kappa = 1 - S_p(mu_x, mu_y) / D_p(x, y).
/// D_p always follows the tree path, also when (x, y) is not a tree edge;
/// the induced detour ratio is reported by the diagnostics layer. x == y is
/// rejected (D_p would vanish).
double src_edge(const RootedTree& tree, const DiscreteMeasure& mu_x, const DiscreteMeasure& mu_y,
                NodeId x, NodeId y, double p);

enum class TreeMode { Spt, Mst, Random };

struct TreeSpec {
  TreeMode mode = TreeMode::Spt;
  NodeId root = 0;         // tree root (SPT source); also used to orient MST/Random
  std::uint64_t seed = 0;  // Random mode only
  std::string describe() const;
};

/// Extracts the spanning tree named by spec and roots it.
RootedTree extract_tree(const WeightedGraph& g, const TreeSpec& spec);

/// Per-edge curvature values aligned with graph.edges(), plus the
/// parameters that produced them.
struct CurvatureField {
  std::string method;  // "SRC-SPT", "SRC-MST", "SRC-RANDOM" or "ORC"
  double p = 1.0;
  MeasureSpec measure;
  TreeSpec tree;  // meaningful for SRC methods only
  std::vector<double> kappa;
};

/// CurvatureField plus the transport and base distances behind each kappa
/// (s = S_p or W_1, d = D_p or d(x, y)); diagnostics consume these.
struct FieldDetail {
  CurvatureField field;
  std::vector<double> s;
  std::vector<double> d;
  int degenerate_measures = 0;
};

/// Curvature of every graph edge from one shared tree. Measures and
/// cut-mass vectors are built once per node; edges are evaluated
/// independently (parallel when threads > 1) and written to fixed slots, so
/// the result does not depend on the thread count.
FieldDetail src_field_detail(const WeightedGraph& g, const TreeSpec& tree_spec,
                             const MeasureSpec& measure_spec, double p,
                             const PointCloud* cloud = nullptr, int threads = 1);
CurvatureField src_field(const WeightedGraph& g, const TreeSpec& tree_spec,
                         const MeasureSpec& measure_spec, double p,
                         const PointCloud* cloud = nullptr, int threads = 1);

}  // namespace ricci
