#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "ricci/diagnostics.hpp"
#include "ricci/flow.hpp"
#include "ricci/graph.hpp"
#include "ricci/point_cloud.hpp"
#include "ricci/prune.hpp"
#include "ricci/sobolev.hpp"

namespace ricci {

using json = nlohmann::ordered_json;

/// External node labels are arbitrary nonnegative integers; internally
/// nodes are dense 0..n-1. The remap keeps both directions.
struct IdRemap {
  std::vector<long long> to_original;       // dense id -> external label
  std::map<long long, NodeId> to_dense;     // external label -> dense id
  bool identity() const;                    // external labels already 0..n-1
};

struct EdgeListData {
  WeightedGraph graph;
  IdRemap remap;
};

/// Edge-list file: `u v [length]` per line, comma- or whitespace-separated,
/// `#` starts a comment, missing third column means length 1.0.
EdgeListData read_edge_list(const std::string& path);
void write_edge_list(const std::string& path, const WeightedGraph& g);

/// Per-node integer labels, CSV `node,label` with header.
void write_labels(const std::string& path, const std::vector<int>& labels);
std::vector<int> read_labels(const std::string& path, int n_nodes,
                             const IdRemap* remap = nullptr);

/// Per-edge weights, CSV `u,v,weight` with header. Reading aligns rows to
/// graph.edges() by endpoint pair; the edge sets must match exactly.
void write_edge_weights(const std::string& path, const WeightedGraph& g,
                        const std::vector<double>& weights);
std::vector<double> read_edge_weights(const std::string& path, const WeightedGraph& g);

/// Per-edge 0/1 flags, CSV `u,v,flag` with header; same alignment rule.
void write_edge_flags(const std::string& path, const WeightedGraph& g,
                      const std::vector<std::uint8_t>& flags);
std::vector<std::uint8_t> read_edge_flags(const std::string& path, const WeightedGraph& g);

/// Curvature field CSV: a `# params: {...}` JSON headline, then
/// `u,v,kappa` rows aligned with graph.edges().
void write_field_csv(const std::string& path, const WeightedGraph& g,
                     const CurvatureField& field);
struct FieldCsv {
  json params;
  std::vector<NodeId> u, v;
  std::vector<double> kappa;
};
FieldCsv read_field_csv(const std::string& path);
json field_params_json(const CurvatureField& field);

/// Point cloud CSV: one point per row, plain coordinates. The intrinsic
/// sidecar carries `component,param,u,v` rows (chart columns u,v).
void write_point_cloud(const std::string& path, const PointCloud& cloud);
void write_intrinsic(const std::string& path, const PointCloud& cloud);
PointCloud read_point_cloud(const std::string& coords_path,
                            const std::string& intrinsic_path = "");

json flow_trace_json(const FlowState& state, const std::string& method_name, double epsilon);
json pruning_report_json(const PruningReport& report);
json bench_json(const std::vector<BenchRecord>& records);

/// What it takes to replay a CLI run: the command, every user-visible
/// parameter, input files with content hashes, and the produced files.
struct RunManifest {
  std::string command;
  json parameters;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, fnv1a hash
  std::vector<std::string> outputs;
  double wall_time_ms = 0;
  int threads = 1;
};
json manifest_json(const RunManifest& manifest);

void write_json_file(const std::string& path, const json& j);
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Shortest round-trip-safe decimal rendering of a double.
std::string fmt_double(double x);

}  // namespace ricci
