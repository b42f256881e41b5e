#include "ricci/prune.hpp"

#include <algorithm>
#include <cmath>

#include "ricci/util.hpp"

namespace ricci {

namespace {

void attach_rates(PruningReport& rep, const WeightedGraph& g,
                  const std::vector<std::uint8_t>* truth) {
  rep.edge_count = g.edge_count();
  if (truth == nullptr) return;
  if (truth->size() != static_cast<std::size_t>(g.edge_count()))
    raise(Errc::SizeMismatch, "shortcut truth does not match edge count");
  int shortcuts = 0;
  for (std::uint8_t f : *truth) shortcuts += f ? 1 : 0;
  int good = g.edge_count() - shortcuts;
  rep.shortcut_count = shortcuts;
  int tp = 0, fp = 0;
  for (int id : rep.removed) {
    if ((*truth)[static_cast<std::size_t>(id)]) ++tp;
    else ++fp;
  }
  if (shortcuts > 0) rep.tp_rate = static_cast<double>(tp) / shortcuts;
  if (good > 0) rep.fp_rate = static_cast<double>(fp) / good;
}

}  // namespace

std::vector<int> curvature_filter(const CurvatureField& field, double delta_m) {
  if (!(delta_m >= 0 && delta_m <= 1)) raise(Errc::InvalidArgument, "delta_m outside [0, 1]");
  double threshold = -1.0 + 4.0 * (1.0 - delta_m);
  std::vector<int> out;
  for (std::size_t id = 0; id < field.kappa.size(); ++id)
    if (field.kappa[id] <= threshold) out.push_back(static_cast<int>(id));
  return out;
}

bool detour_test(const WeightedGraph& g, int edge_id, double lambda_m) {
  if (edge_id < 0 || edge_id >= g.edge_count()) raise(Errc::UnknownNode, "edge id out of range");
  if (!(lambda_m > 0 && lambda_m <= 1)) raise(Errc::InvalidArgument, "lambda_m outside (0, 1]");
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(g.edge_count()), 0);
  mask[static_cast<std::size_t>(edge_id)] = 1;
  const Edge& e = g.edge(edge_id);
  double detour = shortest_path_avoiding(g, e.u, e.v, mask);
  return detour > e.length / lambda_m;  // +inf detour always violates
}

PruningReport manl_prune(const WeightedGraph& g, const CurvatureField& field, double delta_m,
                         double lambda_m, const std::vector<std::uint8_t>* shortcut_truth,
                         int threads) {
  if (field.kappa.size() != static_cast<std::size_t>(g.edge_count()))
    raise(Errc::SizeMismatch, "curvature field does not match edge count");
  if (!(lambda_m > 0 && lambda_m <= 1)) raise(Errc::InvalidArgument, "lambda_m outside (0, 1]");
  PruningReport rep;
  rep.method = field.method + "+manl";
  rep.delta_m = delta_m;
  rep.lambda_m = lambda_m;
  rep.candidates = curvature_filter(field, delta_m);

  std::vector<std::uint8_t> mask(static_cast<std::size_t>(g.edge_count()), 0);
  for (int id : rep.candidates) mask[static_cast<std::size_t>(id)] = 1;

  std::vector<std::uint8_t> keep(rep.candidates.size(), 0);
  parallel_for(static_cast<std::int64_t>(rep.candidates.size()), threads, [&](std::int64_t i) {
    int id = rep.candidates[static_cast<std::size_t>(i)];
    const Edge& e = g.edge(id);
    double detour = shortest_path_avoiding(g, e.u, e.v, mask);
    keep[static_cast<std::size_t>(i)] = detour > e.length / lambda_m ? 1 : 0;
  });
  for (std::size_t i = 0; i < rep.candidates.size(); ++i)
    if (keep[i]) rep.removed.push_back(rep.candidates[i]);
  attach_rates(rep, g, shortcut_truth);
  return rep;
}

PruningReport curvature_only_prune(const WeightedGraph& g, const CurvatureField& field,
                                   double delta_m, const std::vector<std::uint8_t>* shortcut_truth) {
  if (field.kappa.size() != static_cast<std::size_t>(g.edge_count()))
    raise(Errc::SizeMismatch, "curvature field does not match edge count");
  PruningReport rep;
  rep.method = field.method + "+curvature-only";
  rep.delta_m = delta_m;
  rep.candidates = curvature_filter(field, delta_m);
  rep.removed = rep.candidates;
  attach_rates(rep, g, shortcut_truth);
  return rep;
}

PruningReport distance_only_prune(const WeightedGraph& g, double q,
                                  const std::vector<std::uint8_t>* shortcut_truth) {
  if (!(q >= 0 && q <= 1)) raise(Errc::InvalidArgument, "quantile outside [0, 1]");
  if (g.edge_count() == 0) raise(Errc::InvalidArgument, "no edges to prune");
  std::vector<double> lengths;
  lengths.reserve(static_cast<std::size_t>(g.edge_count()));
  for (const Edge& e : g.edges()) lengths.push_back(e.length);
  double cut = quantile(lengths, q);
  PruningReport rep;
  rep.method = "distance-only";
  rep.length_quantile = q;
  for (int id = 0; id < g.edge_count(); ++id)
    if (g.length(id) > cut) rep.removed.push_back(id);
  rep.candidates = rep.removed;
  attach_rates(rep, g, shortcut_truth);
  return rep;
}

}  // namespace ricci
