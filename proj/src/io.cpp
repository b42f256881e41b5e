#include "ricci/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ricci/error.hpp"
#include "ricci/util.hpp"

namespace ricci {

namespace {

void ensure_parent_dir(const std::string& path) {
  std::filesystem::path p(path);
  auto parent = p.parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) raise(Errc::IoError, "cannot create directory " + parent.string() + ": " + ec.message());
  }
}

std::ofstream open_out(const std::string& path) {
  ensure_parent_dir(path);
  std::ofstream out(path);
  if (!out) raise(Errc::IoError, "cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot open " + path + " for reading");
  return in;
}

/// Splits on commas and whitespace, dropping everything from the first '#'.
std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : line) {
    if (ch == '#') break;
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

long long parse_ll(const std::string& token, const std::string& path, int line_no) {
  errno = 0;
  char* end = nullptr;
  long long value = std::strtoll(token.c_str(), &end, 10);
  if (errno != 0 || end == token.c_str() || *end != '\0')
    raise(Errc::IoError, path + ":" + std::to_string(line_no) + ": expected integer, got '" + token + "'");
  return value;
}

double parse_double(const std::string& token, const std::string& path, int line_no) {
  errno = 0;
  char* end = nullptr;
  double value = std::strtod(token.c_str(), &end);
  if (errno != 0 || end == token.c_str() || *end != '\0')
    raise(Errc::IoError, path + ":" + std::to_string(line_no) + ": expected number, got '" + token + "'");
  return value;
}

bool looks_numeric(const std::string& token) {
  char* end = nullptr;
  std::strtod(token.c_str(), &end);
  return end != token.c_str() && *end == '\0';
}

/// Data rows of a CSV-ish file: skips blank/comment lines and one leading
/// header row of non-numeric column names.
std::vector<std::pair<int, std::vector<std::string>>> data_rows(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  std::string line;
  int line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (first_content) {
      first_content = false;
      if (!looks_numeric(tokens[0])) continue;  // header row
    }
    rows.emplace_back(line_no, std::move(tokens));
  }
  return rows;
}

std::vector<double> read_aligned_edge_column(const std::string& path, const WeightedGraph& g,
                                             const char* what) {
  std::map<std::pair<NodeId, NodeId>, double> by_pair;
  for (const auto& [line_no, tokens] : data_rows(path)) {
    if (tokens.size() != 3)
      raise(Errc::IoError, path + ":" + std::to_string(line_no) + ": expected 'u,v," +
                               std::string(what) + "' row");
    auto u = static_cast<NodeId>(parse_ll(tokens[0], path, line_no));
    auto v = static_cast<NodeId>(parse_ll(tokens[1], path, line_no));
    double value = parse_double(tokens[2], path, line_no);
    if (u > v) std::swap(u, v);
    if (!by_pair.emplace(std::make_pair(u, v), value).second)
      raise(Errc::IoError, path + ":" + std::to_string(line_no) + ": duplicate edge row");
  }
  if (static_cast<int>(by_pair.size()) != g.edge_count())
    raise(Errc::SizeMismatch, path + ": has " + std::to_string(by_pair.size()) + " edges, graph has " +
                                  std::to_string(g.edge_count()));
  std::vector<double> column(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edges()[e];
    auto it = by_pair.find({edge.u, edge.v});
    if (it == by_pair.end())
      raise(Errc::UnknownNode, path + ": missing row for edge (" + std::to_string(edge.u) + ", " +
                                   std::to_string(edge.v) + ")");
    column[e] = it->second;
  }
  return column;
}

}  // namespace

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool IdRemap::identity() const {
  for (std::size_t i = 0; i < to_original.size(); ++i)
    if (to_original[i] != static_cast<long long>(i)) return false;
  return true;
}

EdgeListData read_edge_list(const std::string& path) {
  struct RawEdge {
    long long u, v;
    double length;
  };
  std::vector<RawEdge> raw;
  std::vector<long long> labels;
  for (const auto& [line_no, tokens] : data_rows(path)) {
    if (tokens.size() != 2 && tokens.size() != 3)
      raise(Errc::IoError, path + ":" + std::to_string(line_no) + ": expected 'u v [length]' row");
    long long u = parse_ll(tokens[0], path, line_no);
    long long v = parse_ll(tokens[1], path, line_no);
    if (u < 0 || v < 0)
      raise(Errc::IoError, path + ":" + std::to_string(line_no) + ": node labels must be nonnegative");
    double length = tokens.size() == 3 ? parse_double(tokens[2], path, line_no) : 1.0;
    raw.push_back({u, v, length});
    labels.push_back(u);
    labels.push_back(v);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  EdgeListData data;
  data.remap.to_original = labels;
  for (std::size_t i = 0; i < labels.size(); ++i)
    data.remap.to_dense.emplace(labels[i], static_cast<NodeId>(i));

  std::vector<EdgeSpec> specs;
  specs.reserve(raw.size());
  for (const auto& e : raw)
    specs.push_back({data.remap.to_dense.at(e.u), data.remap.to_dense.at(e.v), e.length});
  data.graph = WeightedGraph::build(static_cast<int>(labels.size()), specs);
  return data;
}

void write_edge_list(const std::string& path, const WeightedGraph& g) {
  auto out = open_out(path);
  out << "# nodes: " << g.node_count() << " edges: " << g.edge_count() << "\n";
  for (const auto& e : g.edges())
    out << e.u << " " << e.v << " " << fmt_double(e.length) << "\n";
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
  auto out = open_out(path);
  out << "node,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << "," << labels[i] << "\n";
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

std::vector<int> read_labels(const std::string& path, int n_nodes, const IdRemap* remap) {
  std::vector<int> labels(n_nodes);
  std::vector<std::uint8_t> seen(n_nodes, 0);
  for (const auto& [line_no, tokens] : data_rows(path)) {
    if (tokens.size() != 2)
      raise(Errc::IoError, path + ":" + std::to_string(line_no) + ": expected 'node,label' row");
    long long raw_node = parse_ll(tokens[0], path, line_no);
    long long label = parse_ll(tokens[1], path, line_no);
    NodeId node;
    if (remap != nullptr) {
      auto it = remap->to_dense.find(raw_node);
      if (it == remap->to_dense.end())
        raise(Errc::UnknownNode, path + ":" + std::to_string(line_no) + ": node " +
                                     std::to_string(raw_node) + " not in the graph");
      node = it->second;
    } else {
      if (raw_node < 0 || raw_node >= n_nodes)
        raise(Errc::UnknownNode, path + ":" + std::to_string(line_no) + ": node " +
                                     std::to_string(raw_node) + " out of range");
      node = static_cast<NodeId>(raw_node);
    }
    if (seen[node])
      raise(Errc::IoError, path + ":" + std::to_string(line_no) + ": duplicate node row");
    seen[node] = 1;
    labels[node] = static_cast<int>(label);
  }
  for (int v = 0; v < n_nodes; ++v)
    if (!seen[v]) raise(Errc::IoError, path + ": no label for node " + std::to_string(v));
  return labels;
}

void write_edge_weights(const std::string& path, const WeightedGraph& g,
                        const std::vector<double>& weights) {
  if (static_cast<int>(weights.size()) != g.edge_count())
    raise(Errc::SizeMismatch, "weights/edges: " + std::to_string(weights.size()) + " vs " +
                                  std::to_string(g.edge_count()));
  auto out = open_out(path);
  out << "u,v,weight\n";
  for (int e = 0; e < g.edge_count(); ++e)
    out << g.edges()[e].u << "," << g.edges()[e].v << "," << fmt_double(weights[e]) << "\n";
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

std::vector<double> read_edge_weights(const std::string& path, const WeightedGraph& g) {
  return read_aligned_edge_column(path, g, "weight");
}

void write_edge_flags(const std::string& path, const WeightedGraph& g,
                      const std::vector<std::uint8_t>& flags) {
  if (static_cast<int>(flags.size()) != g.edge_count())
    raise(Errc::SizeMismatch, "flags/edges: " + std::to_string(flags.size()) + " vs " +
                                  std::to_string(g.edge_count()));
  auto out = open_out(path);
  out << "u,v,flag\n";
  for (int e = 0; e < g.edge_count(); ++e)
    out << g.edges()[e].u << "," << g.edges()[e].v << "," << int(flags[e]) << "\n";
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

std::vector<std::uint8_t> read_edge_flags(const std::string& path, const WeightedGraph& g) {
  auto column = read_aligned_edge_column(path, g, "flag");
  std::vector<std::uint8_t> flags(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (column[i] != 0.0 && column[i] != 1.0)
      raise(Errc::IoError, path + ": flag values must be 0 or 1");
    flags[i] = column[i] != 0.0;
  }
  return flags;
}

json field_params_json(const CurvatureField& field) {
  json params;
  params["method"] = field.method;
  params["p"] = field.p;
  params["measure"] = field.measure.describe();
  if (field.method.rfind("SRC", 0) == 0) params["tree"] = field.tree.describe();
  return params;
}

void write_field_csv(const std::string& path, const WeightedGraph& g,
                     const CurvatureField& field) {
  if (static_cast<int>(field.kappa.size()) != g.edge_count())
    raise(Errc::SizeMismatch, "kappa/edges: " + std::to_string(field.kappa.size()) + " vs " +
                                  std::to_string(g.edge_count()));
  auto out = open_out(path);
  out << "# params: " << field_params_json(field).dump() << "\n";
  out << "u,v,kappa\n";
  for (int e = 0; e < g.edge_count(); ++e)
    out << g.edges()[e].u << "," << g.edges()[e].v << "," << fmt_double(field.kappa[e]) << "\n";
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

FieldCsv read_field_csv(const std::string& path) {
  FieldCsv result;
  {
    auto in = open_in(path);
    std::string line;
    while (std::getline(in, line)) {
      auto pos = line.find("# params:");
      if (pos != std::string::npos) {
        result.params = json::parse(line.substr(pos + 9), nullptr, false);
        if (result.params.is_discarded())
          raise(Errc::IoError, path + ": malformed params header");
        break;
      }
      if (!tokenize(line).empty()) break;  // data reached without a header
    }
  }
  for (const auto& [line_no, tokens] : data_rows(path)) {
    if (tokens.size() != 3)
      raise(Errc::IoError, path + ":" + std::to_string(line_no) + ": expected 'u,v,kappa' row");
    result.u.push_back(static_cast<NodeId>(parse_ll(tokens[0], path, line_no)));
    result.v.push_back(static_cast<NodeId>(parse_ll(tokens[1], path, line_no)));
    result.kappa.push_back(parse_double(tokens[2], path, line_no));
  }
  return result;
}

void write_point_cloud(const std::string& path, const PointCloud& cloud) {
  auto out = open_out(path);
  for (int i = 0; i < cloud.size(); ++i) {
    for (int j = 0; j < cloud.dim(); ++j) {
      if (j > 0) out << ",";
      out << fmt_double(cloud.points(i, j));
    }
    out << "\n";
  }
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

void write_intrinsic(const std::string& path, const PointCloud& cloud) {
  if (!cloud.has_components() || !cloud.has_chart())
    raise(Errc::InvalidArgument, "cloud has no intrinsic data to write");
  auto out = open_out(path);
  out << "component,param,u,v\n";
  for (int i = 0; i < cloud.size(); ++i) {
    double param = cloud.param.empty() ? 0.0 : cloud.param[i];
    out << cloud.component[i] << "," << fmt_double(param) << "," << fmt_double(cloud.chart(i, 0))
        << "," << fmt_double(cloud.chart(i, 1)) << "\n";
  }
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

PointCloud read_point_cloud(const std::string& coords_path, const std::string& intrinsic_path) {
  PointCloud cloud;
  auto rows = data_rows(coords_path);
  if (rows.empty()) raise(Errc::IoError, coords_path + ": no points");
  const auto dim = static_cast<int>(rows.front().second.size());
  cloud.points.resize(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [line_no, tokens] = rows[i];
    if (static_cast<int>(tokens.size()) != dim)
      raise(Errc::IoError, coords_path + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(dim) + " coordinates");
    for (int j = 0; j < dim; ++j)
      cloud.points(static_cast<Eigen::Index>(i), j) = parse_double(tokens[j], coords_path, line_no);
  }
  if (intrinsic_path.empty()) return cloud;

  auto irows = data_rows(intrinsic_path);
  if (irows.size() != rows.size())
    raise(Errc::SizeMismatch, intrinsic_path + ": " + std::to_string(irows.size()) +
                                  " rows for " + std::to_string(rows.size()) + " points");
  cloud.component.resize(rows.size());
  cloud.param.resize(rows.size());
  cloud.chart.resize(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t i = 0; i < irows.size(); ++i) {
    const auto& [line_no, tokens] = irows[i];
    if (tokens.size() != 4)
      raise(Errc::IoError, intrinsic_path + ":" + std::to_string(line_no) +
                               ": expected 'component,param,u,v' row");
    cloud.component[i] = static_cast<int>(parse_ll(tokens[0], intrinsic_path, line_no));
    cloud.param[i] = parse_double(tokens[1], intrinsic_path, line_no);
    cloud.chart(static_cast<Eigen::Index>(i), 0) = parse_double(tokens[2], intrinsic_path, line_no);
    cloud.chart(static_cast<Eigen::Index>(i), 1) = parse_double(tokens[3], intrinsic_path, line_no);
  }
  return cloud;
}

json flow_trace_json(const FlowState& state, const std::string& method_name, double epsilon) {
  json j;
  j["method"] = method_name;
  j["epsilon"] = epsilon;
  j["iterations_run"] = state.t;
  j["converged"] = state.converged;
  j["total_clamped"] = state.total_clamped;
  j["trace"] = json::array();
  for (const auto& rec : state.trace) {
    json r;
    r["t"] = rec.t;
    r["sum_w"] = rec.sum_w;
    r["max_dkappa"] = rec.max_dkappa;
    r["runtime_ms"] = rec.runtime_ms;
    r["clamped"] = rec.clamped;
    j["trace"].push_back(std::move(r));
  }
  return j;
}

json pruning_report_json(const PruningReport& report) {
  json j;
  j["method"] = report.method;
  j["delta_m"] = report.delta_m;
  j["lambda_m"] = report.lambda_m;
  if (report.length_quantile) j["length_quantile"] = *report.length_quantile;
  j["edge_count"] = report.edge_count;
  j["stage_counts"] = {{"candidates", report.candidates.size()},
                       {"removed", report.removed.size()}};
  j["candidate_edges"] = report.candidates;
  j["removed_edges"] = report.removed;
  if (report.shortcut_count >= 0) j["shortcut_count"] = report.shortcut_count;
  if (report.tp_rate) j["tp_rate"] = *report.tp_rate;
  if (report.fp_rate) j["fp_rate"] = *report.fp_rate;
  return j;
}

json bench_json(const std::vector<BenchRecord>& records) {
  json j = json::array();
  for (const auto& rec : records) {
    json r;
    r["method"] = rec.method;
    r["nodes"] = rec.nodes;
    r["edges"] = rec.edges;
    r["mean_degree"] = rec.mean_degree;
    r["iterations"] = rec.iterations;
    r["reps"] = rec.reps;
    r["threads"] = rec.threads;
    r["median_ms"] = rec.median_ms;
    r["q25_ms"] = rec.q25_ms;
    r["q75_ms"] = rec.q75_ms;
    j.push_back(std::move(r));
  }
  return j;
}

json manifest_json(const RunManifest& manifest) {
  json j;
  j["command"] = manifest.command;
  j["parameters"] = manifest.parameters;
  j["seed"] = manifest.seed;
  j["inputs"] = json::object();
  for (const auto& [path, hash] : manifest.inputs) j["inputs"][path] = hash;
  j["outputs"] = manifest.outputs;
  j["wall_time_ms"] = manifest.wall_time_ms;
  j["threads"] = manifest.threads;
  j["version"] = version_string();
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

json read_json_file(const std::string& path) {
  auto in = open_in(path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) raise(Errc::IoError, path + ": malformed JSON");
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

}  // namespace ricci
