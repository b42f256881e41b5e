#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ricci/graph.hpp"
#include "ricci/sobolev.hpp"

namespace ricci {

struct PruningReport {
  std::string method;
  double delta_m = 0;
  double lambda_m = 0;
  std::optional<double> length_quantile;  // distance-only baseline
  std::vector<int> candidates;            // stage-1 edge ids
  std::vector<int> removed;               // final edge ids
  std::optional<double> tp_rate;          // filled when ground truth given
  std::optional<double> fp_rate;
  int edge_count = 0;
  int shortcut_count = -1;  // -1 when no ground truth
};

/// Stage 1: edge ids whose curvature satisfies
///   kappa <= -1 + 4 (1 - delta_m),
/// e.g. delta_m = 0.75 keeps exactly the nonpositive curvatures.
std::vector<int> curvature_filter(const CurvatureField& field, double delta_m);

/// Stage 2 primitive: with edge e = (u, v) removed, is the surviving u-v
/// distance larger than length(e) / lambda_m? An unreachable v counts as a
/// violation. lambda_m in (0, 1].
bool detour_test(const WeightedGraph& g, int edge_id, double lambda_m);

/// Two-stage shortcut removal: curvature filter, then the detour test
/// evaluated with the whole candidate set absent (so parallel shortcuts
/// cannot vouch for each other). When ground-truth flags are given, the
/// report carries
///   tp_rate = removed true shortcuts / all true shortcuts
///   fp_rate = removed good edges / all good edges.
PruningReport manl_prune(const WeightedGraph& g, const CurvatureField& field, double delta_m,
                         double lambda_m, const std::vector<std::uint8_t>* shortcut_truth = nullptr,
                         int threads = 1);

/// Stage 1 only.
PruningReport curvature_only_prune(const WeightedGraph& g, const CurvatureField& field,
                                   double delta_m,
                                   const std::vector<std::uint8_t>* shortcut_truth = nullptr);

/// Length-quantile baseline: removes edges longer than the q-quantile of
/// the edge lengths.
PruningReport distance_only_prune(const WeightedGraph& g, double q,
                                  const std::vector<std::uint8_t>* shortcut_truth = nullptr);

}  // namespace ricci
