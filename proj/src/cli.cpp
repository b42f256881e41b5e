#include "ricci/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <thread>

#include "CLI11.hpp"
#include "ricci/community.hpp"
#include "ricci/diagnostics.hpp"
#include "ricci/error.hpp"
#include "ricci/flow.hpp"
#include "ricci/generate.hpp"
#include "ricci/io.hpp"
#include "ricci/prune.hpp"
#include "ricci/util.hpp"

namespace ricci {
namespace {

/// Config files are JSON: top-level keys are long flag names (without
/// dashes), subcommands are nested objects. Command-line flags win over
/// file values.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return app_json(app, default_also).dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j = json::parse(input, nullptr, false);
    if (j.is_discarded()) throw CLI::FileError("config file is not valid JSON");
    std::vector<CLI::ConfigItem> items;
    walk(j, {}, items);
    return items;
  }

 private:
  static json app_json(const CLI::App* app, bool default_also) {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string& name = opt->get_lnames().front();
      if (!opt->results().empty())
        j[name] = opt->results().size() == 1 ? json(opt->results().front()) : json(opt->results());
      else if (default_also)
        j[name] = opt->get_default_str();
    }
    for (const CLI::App* sub : app->get_subcommands(std::function<bool(const CLI::App*)>{})) {
      json nested = app_json(sub, default_also);
      if (!nested.empty()) j[sub->get_name()] = std::move(nested);
    }
    return j;
  }

  static void walk(const json& j, std::vector<std::string> parents,
                   std::vector<CLI::ConfigItem>& items) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_object()) {
        auto deeper = parents;
        deeper.push_back(it.key());
        walk(it.value(), std::move(deeper), items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it.value().is_array())
        for (const auto& element : it.value()) item.inputs.push_back(scalar(element));
      else
        item.inputs.push_back(scalar(it.value()));
      items.push_back(std::move(item));
    }
  }

  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }
};

int default_threads() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

std::string default_out_dir() {
  const char* env = std::getenv("RICCI_OUT");
  return (env != nullptr && *env != '\0') ? env : ".";
}

/// Collects what every command reports: output paths, hashed inputs,
/// flag values, and the wall time, flushed into <out>/manifest.json.
struct RunScope {
  RunManifest manifest;
  WallTimer timer;

  RunScope(std::string command, std::string out_dir, int threads) : out(std::move(out_dir)) {
    manifest.command = std::move(command);
    manifest.parameters = json::object();
    manifest.threads = threads;
  }

  std::string path(const std::string& name) const {
    return (std::filesystem::path(out) / name).string();
  }
  void param(const std::string& key, json value) { manifest.parameters[key] = std::move(value); }
  std::string input(const std::string& file) {
    manifest.inputs.emplace_back(file, fnv1a_hex_of_file(file));
    return file;
  }
  std::string output(const std::string& name) {
    auto file = path(name);
    manifest.outputs.push_back(file);
    return file;
  }
  void finish() {
    manifest.wall_time_ms = timer.elapsed_ms();
    write_json_file(path("manifest.json"), manifest_json(manifest));
  }

  std::string out;
};

struct CommonFlags {
  std::string out = default_out_dir();
  int threads = default_threads();

  void attach(CLI::App* cmd, int threads_default = 0) {
    if (threads_default > 0) threads = threads_default;
    cmd->add_option("--out", out, "Output directory")->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads; 1 gives bit-identical reruns")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
};

struct MeasureFlags {
  std::string kind = "lazy";
  double alpha = 0.5;
  int k = 10;
  double sigma = 1.0;
  double p_norm = 2.0;
  std::string cloud_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--measure", kind, "Node measure family")
        ->check(CLI::IsMember({"dirac", "lazy", "gaussian"}))
        ->capture_default_str();
    cmd->add_option("--alpha", alpha, "Laziness of the lazy random-walk measure")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--knn", k, "Neighborhood size of the gaussian measure")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--sigma", sigma, "Bandwidth of the gaussian measure")
        ->capture_default_str();
    cmd->add_option("--p-norm", p_norm, "Ambient distance order of the gaussian measure")
        ->capture_default_str();
    cmd->add_option("--cloud", cloud_path, "Point-cloud CSV backing the gaussian measure");
  }

  MeasureSpec spec() const {
    if (kind == "dirac") return MeasureSpec::make_dirac();
    if (kind == "lazy") return MeasureSpec::lazy(alpha);
    return MeasureSpec::gaussian(k, sigma, p_norm);
  }

  void record(RunScope& scope) const {
    scope.param("measure", kind);
    if (kind == "lazy") scope.param("alpha", alpha);
    if (kind == "gaussian") {
      scope.param("knn", k);
      scope.param("sigma", sigma);
      scope.param("p_norm", p_norm);
    }
  }

  /// Loads --cloud when given (hashing it into the manifest).
  std::optional<PointCloud> load_cloud(RunScope& scope) const {
    if (cloud_path.empty()) return std::nullopt;
    return read_point_cloud(scope.input(cloud_path));
  }
};

struct FieldFlags {
  std::string method = "src-spt";
  double p = 1.0;
  NodeId root = 0;
  std::uint64_t tree_seed = 0;

  void attach(CLI::App* cmd, bool with_orc = true) {
    std::vector<std::string> methods = {"src-spt", "src-mst", "src-random"};
    if (with_orc) methods.emplace_back("orc");
    cmd->add_option("--method", method, "Curvature method")
        ->check(CLI::IsMember(methods))
        ->capture_default_str();
    cmd->add_option("--p", p, "Transport order p >= 1")->capture_default_str();
    cmd->add_option("--root", root, "Tree root node")->capture_default_str();
    cmd->add_option("--tree-seed", tree_seed, "Seed of the random spanning tree")
        ->capture_default_str();
  }

  bool is_orc() const { return method == "orc"; }

  TreeSpec tree() const {
    TreeSpec spec;
    spec.mode = method == "src-mst"      ? TreeMode::Mst
                : method == "src-random" ? TreeMode::Random
                                         : TreeMode::Spt;
    spec.root = root;
    spec.seed = tree_seed;
    return spec;
  }

  FlowMethod flow_method() const {
    return is_orc() ? FlowMethod::orc() : FlowMethod::src(tree(), p);
  }

  void record(RunScope& scope) const {
    scope.param("method", method);
    if (!is_orc()) {
      scope.param("p", p);
      scope.param("root", root);
      if (method == "src-random") scope.param("tree_seed", tree_seed);
    }
  }
};

FieldDetail compute_field_detail(const WeightedGraph& g, const FieldFlags& ff,
                                 const MeasureSpec& measure, const PointCloud* cloud,
                                 int threads) {
  if (ff.is_orc()) return orc_field_detail(g, measure, cloud, threads);
  return src_field_detail(g, ff.tree(), measure, ff.p, cloud, threads);
}

json histogram_json(const Histogram& hist) {
  json j;
  j["bin_edges"] = hist.edges;
  j["counts"] = hist.counts;
  return j;
}

json stats_json(const Stats& stats) {
  json j;
  j["mean"] = stats.mean;
  j["stddev"] = stats.stddev;
  j["min"] = stats.min;
  j["q25"] = stats.q25;
  j["median"] = stats.median;
  j["q75"] = stats.q75;
  j["max"] = stats.max;
  j["count"] = stats.count;
  return j;
}

std::vector<double> log_spaced(double from, double to, int steps) {
  if (!(from > 0) || !(to > 0)) raise(Errc::InvalidArgument, "schedule endpoints must be positive");
  if (steps < 1) raise(Errc::InvalidArgument, "schedule needs at least one step");
  if (steps == 1) return {to};
  std::vector<double> xs(steps);
  const double ratio = std::pow(to / from, 1.0 / (steps - 1));
  double x = from;
  for (int i = 0; i < steps; ++i) {
    xs[i] = x;
    x *= ratio;
  }
  xs.back() = to;
  return xs;
}

class CliApp {
 public:
  CliApp() : app_("Graph curvature toolkit: tree-transport curvature, Ricci flow, pruning", "ricci") {
    app_.set_version_flag("--version", version_string());
    app_.config_formatter(std::make_shared<JsonConfig>());
    app_.set_config("--config", "", "JSON config file; explicit flags override it");
    app_.require_subcommand(1);
    build_gen();
    build_curvature();
    build_flow();
    build_cluster();
    build_prune();
    build_diag();
    build_bench();
    // Let app-level flags (--config, --version) appear after a subcommand.
    set_fallthrough(&app_);
  }

  static void set_fallthrough(CLI::App* cmd) {
    cmd->fallthrough(true);
    for (CLI::App* sub : cmd->get_subcommands(std::function<bool(CLI::App*)>{}))
      set_fallthrough(sub);
  }

  int run(int argc, const char* const* argv) {
    try {
      app_.parse(argc, argv);
      return 0;
    } catch (const CLI::ParseError& e) {
      int code = app_.exit(e);
      return code == 0 ? 0 : 2;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }

 private:
  CLI::App app_;

  // gen
  CommonFlags gen_common_;
  int sbm_n_ = 500, sbm_k_ = 2;
  double sbm_p_intra_ = 0.15, sbm_rho_ = 0.1;
  std::uint64_t sbm_seed_ = 7;
  std::string man_kind_ = "concentric_circles";
  int man_n_ = 1000;
  double man_noise_ = 0.05, man_r1_ = 1.0, man_r2_ = 2.0;
  std::uint64_t man_seed_ = 7;
  std::string knn_cloud_, knn_intrinsic_;
  int knn_k_ = 10;
  double knn_ratio_ = 3.0, knn_p_norm_ = 2.0;

  // curvature
  CommonFlags curv_common_;
  MeasureFlags curv_measure_;
  FieldFlags curv_field_;
  std::string curv_graph_;

  // flow
  CommonFlags flow_common_;
  MeasureFlags flow_measure_;
  FieldFlags flow_field_;
  std::string flow_graph_;
  int flow_iters_ = 20;
  double flow_eps_ = 1e-4;

  // cluster
  CommonFlags cl_common_;
  std::string cl_graph_, cl_weights_, cl_truth_;
  double cl_beta_ = 1.0, cl_resolution_ = 1.0;
  std::uint64_t cl_seed_ = 0;

  // prune
  CommonFlags pr_common_;
  MeasureFlags pr_measure_;
  FieldFlags pr_field_;
  std::string pr_graph_, pr_mode_ = "manl", pr_truth_;
  double pr_delta_ = 0.75, pr_lambda_ = 0.01, pr_quantile_ = 0.9;

  // diag
  CommonFlags rs_common_;
  MeasureFlags rs_measure_;
  std::string rs_graph_;
  double rs_p_ = 1.0;
  int rs_pairs_ = 10;
  std::uint64_t rs_seed_ = 0;

  CommonFlags sw_common_;
  std::string sw_graph_, sw_family_ = "lazy", sw_cloud_;
  double sw_p_ = 1.0, sw_from_ = -1.0, sw_to_ = -1.0, sw_p_norm_ = 2.0;
  int sw_steps_ = 6, sw_knn_ = 10;
  NodeId sw_root_ = 0;

  CommonFlags hist_common_;
  MeasureFlags hist_measure_;
  FieldFlags hist_field_;
  std::string hist_graph_;
  int hist_bins_ = 32;

  CommonFlags tr_common_;
  MeasureFlags tr_measure_;
  std::string tr_graph_;
  double tr_p_ = 1.0;
  NodeId tr_root_ = 0;
  int tr_seeds_ = 5, tr_bins_ = 32;
  std::uint64_t tr_seed_ = 0;

  // bench
  CommonFlags bench_common_;
  MeasureFlags bench_measure_;
  std::string bench_graph_;
  std::vector<std::string> bench_methods_ = {"src-spt", "src-mst", "orc"};
  double bench_p_ = 1.0;
  int bench_iters_ = 3, bench_reps_ = 3;

  EdgeListData load_graph(RunScope& scope, const std::string& path) {
    return read_edge_list(scope.input(path));
  }

  void build_gen() {
    auto* gen = app_.add_subcommand("gen", "Generate seeded synthetic datasets");
    gen->require_subcommand(1);

    auto* sbm_cmd = gen->add_subcommand("sbm", "Stochastic block model with planted communities");
    sbm_cmd->add_option("--n", sbm_n_, "Nodes (divisible by --k)")->capture_default_str();
    sbm_cmd->add_option("--k", sbm_k_, "Equal-size blocks")->capture_default_str();
    sbm_cmd->add_option("--p-intra", sbm_p_intra_, "Intra-block edge probability")
        ->capture_default_str();
    sbm_cmd->add_option("--rho", sbm_rho_, "Inter/intra probability ratio")->capture_default_str();
    sbm_cmd->add_option("--seed", sbm_seed_, "RNG seed")->capture_default_str();
    gen_common_.attach(sbm_cmd);
    sbm_cmd->callback([this] { run_gen_sbm(); });

    auto* man_cmd = gen->add_subcommand("manifold", "Noisy manifold point cloud with ground truth");
    man_cmd->add_option("--kind", man_kind_, "Manifold family")
        ->check(CLI::IsMember({"concentric_circles", "moons", "s_curve", "swiss_roll_3d"}))
        ->capture_default_str();
    man_cmd->add_option("--n", man_n_, "Points")->capture_default_str();
    man_cmd->add_option("--noise", man_noise_, "Ambient Gaussian noise stddev")
        ->capture_default_str();
    man_cmd->add_option("--r1", man_r1_, "Inner radius (concentric_circles)")
        ->capture_default_str();
    man_cmd->add_option("--r2", man_r2_, "Outer radius (concentric_circles)")
        ->capture_default_str();
    man_cmd->add_option("--seed", man_seed_, "RNG seed")->capture_default_str();
    gen_common_.attach(man_cmd);
    man_cmd->callback([this] { run_gen_manifold(); });

    auto* knn_cmd = gen->add_subcommand("knn", "k-nearest-neighbor graph over a point cloud");
    knn_cmd->add_option("--cloud", knn_cloud_, "Point-cloud CSV")->required();
    knn_cmd->add_option("--intrinsic", knn_intrinsic_,
                        "Intrinsic sidecar CSV (enables shortcut ground truth)");
    knn_cmd->add_option("--k", knn_k_, "Neighbors per point")->capture_default_str();
    knn_cmd->add_option("--ratio", knn_ratio_, "Chart/ambient detour ratio flagging a shortcut")
        ->capture_default_str();
    knn_cmd->add_option("--p-norm", knn_p_norm_, "Ambient distance order")->capture_default_str();
    gen_common_.attach(knn_cmd);
    knn_cmd->callback([this] { run_gen_knn(); });
  }

  void run_gen_sbm() {
    RunScope scope("gen sbm", gen_common_.out, gen_common_.threads);
    scope.manifest.seed = sbm_seed_;
    scope.param("n", sbm_n_);
    scope.param("k", sbm_k_);
    scope.param("p_intra", sbm_p_intra_);
    scope.param("rho", sbm_rho_);
    scope.param("seed", sbm_seed_);
    LabeledGraph data = sbm(sbm_n_, sbm_k_, sbm_p_intra_, sbm_rho_, sbm_seed_);
    write_edge_list(scope.output("graph.edges"), data.graph);
    write_labels(scope.output("labels.csv"), data.node_label);
    scope.finish();
    std::cout << "sbm: n=" << data.graph.node_count() << " m=" << data.graph.edge_count()
              << " -> " << scope.path("graph.edges") << "\n";
  }

  void run_gen_manifold() {
    RunScope scope("gen manifold", gen_common_.out, gen_common_.threads);
    scope.manifest.seed = man_seed_;
    scope.param("kind", man_kind_);
    scope.param("n", man_n_);
    scope.param("noise", man_noise_);
    scope.param("r1", man_r1_);
    scope.param("r2", man_r2_);
    scope.param("seed", man_seed_);
    ManifoldParams params;
    params.noise = man_noise_;
    params.r1 = man_r1_;
    params.r2 = man_r2_;
    PointCloud cloud = manifold(manifold_kind_from_name(man_kind_), man_n_, params, man_seed_);
    write_point_cloud(scope.output("cloud.csv"), cloud);
    write_intrinsic(scope.output("intrinsic.csv"), cloud);
    scope.finish();
    std::cout << "manifold " << man_kind_ << ": n=" << cloud.size() << " d=" << cloud.dim()
              << " -> " << scope.path("cloud.csv") << "\n";
  }

  void run_gen_knn() {
    RunScope scope("gen knn", gen_common_.out, gen_common_.threads);
    scope.param("k", knn_k_);
    scope.param("ratio", knn_ratio_);
    scope.param("p_norm", knn_p_norm_);
    PointCloud cloud = read_point_cloud(scope.input(knn_cloud_),
                                        knn_intrinsic_.empty() ? "" : scope.input(knn_intrinsic_));
    ShortcutRule rule;
    rule.ratio = knn_ratio_;
    LabeledGraph data = knn_graph_with_labels(cloud, knn_k_, rule, knn_p_norm_);
    write_edge_list(scope.output("graph.edges"), data.graph);
    if (!data.edge_shortcut.empty())
      write_edge_flags(scope.output("shortcuts.csv"), data.graph, data.edge_shortcut);
    if (!data.node_label.empty()) write_labels(scope.output("labels.csv"), data.node_label);
    scope.finish();
    int shortcuts = 0;
    for (auto f : data.edge_shortcut) shortcuts += f;
    std::cout << "knn: n=" << data.graph.node_count() << " m=" << data.graph.edge_count()
              << " shortcuts=" << shortcuts << " -> " << scope.path("graph.edges") << "\n";
  }

  void build_curvature() {
    auto* cmd = app_.add_subcommand("curvature", "Per-edge curvature field of a graph");
    cmd->add_option("--graph", curv_graph_, "Edge-list file")->required();
    curv_field_.attach(cmd);
    curv_measure_.attach(cmd);
    curv_common_.attach(cmd);
    cmd->callback([this] { run_curvature(); });
  }

  void run_curvature() {
    RunScope scope("curvature", curv_common_.out, curv_common_.threads);
    scope.manifest.seed = curv_field_.tree_seed;
    curv_field_.record(scope);
    curv_measure_.record(scope);
    auto data = load_graph(scope, curv_graph_);
    auto cloud = curv_measure_.load_cloud(scope);
    FieldDetail detail = compute_field_detail(data.graph, curv_field_, curv_measure_.spec(),
                                              cloud ? &*cloud : nullptr, curv_common_.threads);
    write_field_csv(scope.output("field.csv"), data.graph, detail.field);
    scope.finish();
    Stats stats = summarize(detail.field.kappa);
    std::cout << detail.field.method << ": m=" << data.graph.edge_count() << " kappa in ["
              << stats.min << ", " << stats.max << "], mean " << stats.mean << " -> "
              << scope.path("field.csv") << "\n";
  }

  void build_flow() {
    auto* cmd = app_.add_subcommand("flow", "Curvature flow on the edge weights");
    cmd->add_option("--graph", flow_graph_, "Edge-list file")->required();
    cmd->add_option("--iters", flow_iters_, "Maximum flow iterations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--eps", flow_eps_, "Early-stop threshold on the curvature change")
        ->capture_default_str();
    flow_field_.attach(cmd);
    flow_measure_.attach(cmd);
    flow_common_.attach(cmd);
    cmd->callback([this] { run_flow_cmd(); });
  }

  void run_flow_cmd() {
    RunScope scope("flow", flow_common_.out, flow_common_.threads);
    scope.manifest.seed = flow_field_.tree_seed;
    flow_field_.record(scope);
    flow_measure_.record(scope);
    scope.param("iters", flow_iters_);
    scope.param("eps", flow_eps_);
    auto data = load_graph(scope, flow_graph_);
    auto cloud = flow_measure_.load_cloud(scope);
    FlowState state = run_flow(data.graph, flow_field_.flow_method(), flow_measure_.spec(),
                               flow_iters_, flow_eps_, cloud ? &*cloud : nullptr,
                               flow_common_.threads);
    write_edge_weights(scope.output("weights.csv"), data.graph, state.weights);
    write_json_file(scope.output("trace.json"),
                    flow_trace_json(state, flow_field_.flow_method().name(), flow_eps_));
    scope.finish();
    std::cout << "flow " << flow_field_.flow_method().name() << ": t=" << state.t
              << (state.converged ? " (converged)" : "") << " -> " << scope.path("weights.csv")
              << "\n";
  }

  void build_cluster() {
    auto* cmd = app_.add_subcommand("cluster", "Louvain communities from edge weights");
    cmd->add_option("--graph", cl_graph_, "Edge-list file")->required();
    cmd->add_option("--weights", cl_weights_,
                    "Edge weights CSV (defaults to the graph's own lengths)");
    cmd->add_option("--beta", cl_beta_, "Similarity transform s = exp(-beta w)")
        ->capture_default_str();
    cmd->add_option("--resolution", cl_resolution_, "Modularity resolution")
        ->capture_default_str();
    cmd->add_option("--seed", cl_seed_, "Louvain sweep-order seed")->capture_default_str();
    cmd->add_option("--truth", cl_truth_, "Ground-truth labels CSV; adds ARI to the report");
    cl_common_.attach(cmd);
    cmd->callback([this] { run_cluster(); });
  }

  void run_cluster() {
    RunScope scope("cluster", cl_common_.out, cl_common_.threads);
    scope.manifest.seed = cl_seed_;
    scope.param("beta", cl_beta_);
    scope.param("resolution", cl_resolution_);
    scope.param("seed", cl_seed_);
    auto data = load_graph(scope, cl_graph_);
    std::vector<double> lengths;
    if (cl_weights_.empty()) {
      lengths.reserve(data.graph.edge_count());
      for (const auto& e : data.graph.edges()) lengths.push_back(e.length);
    } else {
      lengths = read_edge_weights(scope.input(cl_weights_), data.graph);
    }
    std::vector<double> similarity = to_similarity(lengths, cl_beta_);
    Partition part = louvain(data.graph, similarity, cl_resolution_, cl_seed_);
    double q = modularity(data.graph, similarity, part, cl_resolution_);

    json report;
    report["communities"] = part.community_count();
    report["modularity"] = q;
    report["beta"] = cl_beta_;
    report["resolution"] = cl_resolution_;
    report["seed"] = cl_seed_;
    if (!cl_truth_.empty()) {
      auto truth_labels = read_labels(scope.input(cl_truth_), data.graph.node_count(),
                                      data.remap.identity() ? nullptr : &data.remap);
      Partition truth = Partition::canonical(truth_labels);
      report["ari"] = ari(part, truth);
    }
    write_labels(scope.output("partition.csv"), part.label);
    write_json_file(scope.output("cluster.json"), report);
    scope.finish();
    std::cout << "cluster: " << part.community_count() << " communities, Q=" << q;
    if (report.contains("ari")) std::cout << ", ARI=" << report["ari"].get<double>();
    std::cout << " -> " << scope.path("partition.csv") << "\n";
  }

  void build_prune() {
    auto* cmd = app_.add_subcommand("prune", "Remove shortcut edges by curvature + detour");
    cmd->add_option("--graph", pr_graph_, "Edge-list file")->required();
    cmd->add_option("--mode", pr_mode_, "Pruning strategy")
        ->check(CLI::IsMember({"manl", "curvature-only", "distance-only"}))
        ->capture_default_str();
    cmd->add_option("--delta", pr_delta_, "Curvature stage strength in [0,1]")
        ->capture_default_str();
    cmd->add_option("--lambda", pr_lambda_, "Detour stage threshold in (0,1]")
        ->capture_default_str();
    cmd->add_option("--quantile", pr_quantile_, "Length cutoff quantile (distance-only)")
        ->capture_default_str();
    cmd->add_option("--shortcuts", pr_truth_, "Ground-truth shortcut flags CSV; adds tp/fp rates");
    pr_field_.attach(cmd);
    pr_measure_.attach(cmd);
    pr_common_.attach(cmd);
    cmd->callback([this] { run_prune(); });
  }

  void run_prune() {
    RunScope scope("prune", pr_common_.out, pr_common_.threads);
    scope.manifest.seed = pr_field_.tree_seed;
    scope.param("mode", pr_mode_);
    auto data = load_graph(scope, pr_graph_);
    std::vector<std::uint8_t> truth;
    const std::vector<std::uint8_t>* truth_ptr = nullptr;
    if (!pr_truth_.empty()) {
      truth = read_edge_flags(scope.input(pr_truth_), data.graph);
      truth_ptr = &truth;
    }

    PruningReport report;
    if (pr_mode_ == "distance-only") {
      scope.param("quantile", pr_quantile_);
      report = distance_only_prune(data.graph, pr_quantile_, truth_ptr);
    } else {
      scope.param("delta", pr_delta_);
      pr_field_.record(scope);
      pr_measure_.record(scope);
      auto cloud = pr_measure_.load_cloud(scope);
      FieldDetail detail = compute_field_detail(data.graph, pr_field_, pr_measure_.spec(),
                                                cloud ? &*cloud : nullptr, pr_common_.threads);
      if (pr_mode_ == "curvature-only") {
        report = curvature_only_prune(data.graph, detail.field, pr_delta_, truth_ptr);
      } else {
        scope.param("lambda", pr_lambda_);
        report = manl_prune(data.graph, detail.field, pr_delta_, pr_lambda_, truth_ptr,
                            pr_common_.threads);
      }
    }

    write_json_file(scope.output("report.json"), pruning_report_json(report));
    {
      auto out_path = scope.output("removed.csv");
      std::string text = "u,v,length\n";
      for (int e : report.removed) {
        const auto& edge = data.graph.edges()[e];
        text += std::to_string(edge.u) + "," + std::to_string(edge.v) + "," +
                fmt_double(edge.length) + "\n";
      }
      write_text_file(out_path, text);
    }
    {
      std::vector<std::uint8_t> remove_mask(data.graph.edge_count(), 0);
      for (int e : report.removed) remove_mask[e] = 1;
      write_edge_list(scope.output("pruned.edges"), data.graph.without_edges(remove_mask));
    }
    scope.finish();
    std::cout << "prune " << report.method << ": removed " << report.removed.size() << "/"
              << report.edge_count;
    if (report.tp_rate) std::cout << ", tp=" << *report.tp_rate << " fp=" << *report.fp_rate;
    std::cout << " -> " << scope.path("report.json") << "\n";
  }

  void build_diag() {
    auto* diag = app_.add_subcommand("diag", "Consistency and robustness diagnostics");
    diag->require_subcommand(1);

    auto* rs = diag->add_subcommand("root-sens", "Curvature change across tree roots vs bound");
    rs->add_option("--graph", rs_graph_, "Edge-list file")->required();
    rs->add_option("--pairs", rs_pairs_, "Sampled root pairs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    rs->add_option("--p", rs_p_, "Transport order")->capture_default_str();
    rs->add_option("--seed", rs_seed_, "Root-pair sampling seed")->capture_default_str();
    rs_measure_.attach(rs);
    rs_common_.attach(rs);
    rs->callback([this] { run_root_sens(); });

    auto* sw = diag->add_subcommand("dirac-sweep", "Curvature decay towards the Dirac limit");
    sw->add_option("--graph", sw_graph_, "Edge-list file")->required();
    sw->add_option("--family", sw_family_, "Swept measure family")
        ->check(CLI::IsMember({"lazy", "gaussian"}))
        ->capture_default_str();
    sw->add_option("--steps", sw_steps_, "Schedule points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sw->add_option("--from", sw_from_, "First swept value (alpha or sigma); family default");
    sw->add_option("--to", sw_to_, "Terminal swept value; family default");
    sw->add_option("--p", sw_p_, "Transport order")->capture_default_str();
    sw->add_option("--root", sw_root_, "Tree root")->capture_default_str();
    sw->add_option("--cloud", sw_cloud_, "Point-cloud CSV (gaussian family)");
    sw->add_option("--knn", sw_knn_, "Neighborhood size (gaussian family)")
        ->capture_default_str();
    sw->add_option("--p-norm", sw_p_norm_, "Ambient distance order (gaussian family)")
        ->capture_default_str();
    sw_common_.attach(sw);
    sw->callback([this] { run_dirac_sweep(); });

    auto* hist = diag->add_subcommand("hist", "Histogram of a curvature field");
    hist->add_option("--graph", hist_graph_, "Edge-list file")->required();
    hist->add_option("--bins", hist_bins_, "Histogram bins")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    hist_field_.attach(hist);
    hist_measure_.attach(hist);
    hist_common_.attach(hist);
    hist->callback([this] { run_hist(); });

    auto* tr = diag->add_subcommand("tree-robust", "Curvature summaries across tree modes");
    tr->add_option("--graph", tr_graph_, "Edge-list file")->required();
    tr->add_option("--p", tr_p_, "Transport order")->capture_default_str();
    tr->add_option("--root", tr_root_, "Tree root")->capture_default_str();
    tr->add_option("--seeds", tr_seeds_, "Random spanning trees to sample")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    tr->add_option("--seed", tr_seed_, "Base seed of the random trees")->capture_default_str();
    tr->add_option("--bins", tr_bins_, "Histogram bins")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    tr_measure_.attach(tr);
    tr_common_.attach(tr);
    tr->callback([this] { run_tree_robust(); });
  }

  void run_root_sens() {
    RunScope scope("diag root-sens", rs_common_.out, rs_common_.threads);
    scope.manifest.seed = rs_seed_;
    scope.param("pairs", rs_pairs_);
    scope.param("p", rs_p_);
    scope.param("seed", rs_seed_);
    rs_measure_.record(scope);
    auto data = load_graph(scope, rs_graph_);
    auto cloud = rs_measure_.load_cloud(scope);
    const int n = data.graph.node_count();
    if (n < 2) raise(Errc::InvalidArgument, "root sensitivity needs at least two nodes");

    std::mt19937_64 rng(rs_seed_);
    json records = json::array();
    int violations = 0;
    for (int i = 0; i < rs_pairs_; ++i) {
      auto a = static_cast<NodeId>(rng() % n);
      auto b = static_cast<NodeId>(rng() % n);
      while (b == a) b = static_cast<NodeId>(rng() % n);
      RootSensitivityRecord rec = root_sensitivity(data.graph, rs_measure_.spec(), rs_p_, a, b,
                                                   cloud ? &*cloud : nullptr, rs_common_.threads);
      json r;
      r["root_a"] = rec.root_a;
      r["root_b"] = rec.root_b;
      r["tree_edge_delta"] = rec.tree_edge_delta;
      r["mean_abs_diff"] = rec.mean_abs_diff;
      r["ratio"] = rec.ratio;
      r["bound_constant"] = rec.bound_constant;
      r["ell_max"] = rec.ell_max;
      r["d_min"] = rec.d_min;
      r["s_max"] = rec.s_max;
      r["within_bound"] = rec.ratio <= rec.bound_constant;
      if (rec.ratio > rec.bound_constant) ++violations;
      records.push_back(std::move(r));
    }
    json report;
    report["records"] = std::move(records);
    report["violations"] = violations;
    write_json_file(scope.output("root_sensitivity.json"), report);
    scope.finish();
    std::cout << "root-sens: " << rs_pairs_ << " pairs, " << violations
              << " bound violations -> " << scope.path("root_sensitivity.json") << "\n";
  }

  void run_dirac_sweep() {
    RunScope scope("diag dirac-sweep", sw_common_.out, sw_common_.threads);
    scope.param("family", sw_family_);
    scope.param("steps", sw_steps_);
    scope.param("p", sw_p_);
    auto data = load_graph(scope, sw_graph_);
    TreeSpec tree;
    tree.root = sw_root_;

    std::vector<DiracSweepRow> rows;
    if (sw_family_ == "lazy") {
      double from = sw_from_ >= 0 ? sw_from_ : 0.5;
      double to = sw_to_ >= 0 ? sw_to_ : 1.0 - 1e-8;
      scope.param("from", from);
      scope.param("to", to);
      if (!(from < 1.0) || !(to < 1.0) || !(from >= 0) || !(to >= 0))
        raise(Errc::InvalidArgument, "alpha schedule must stay in [0, 1)");
      auto gaps = log_spaced(1.0 - from, 1.0 - to, sw_steps_);
      std::vector<double> alphas;
      alphas.reserve(gaps.size());
      for (double gap : gaps) alphas.push_back(1.0 - gap);
      rows = dirac_sweep_alpha(data.graph, tree, sw_p_, alphas, sw_common_.threads);
    } else {
      if (sw_cloud_.empty())
        raise(Errc::InvalidArgument, "the gaussian family needs --cloud");
      PointCloud cloud = read_point_cloud(scope.input(sw_cloud_));
      double from = sw_from_ >= 0 ? sw_from_ : 1.0;
      double to = sw_to_ >= 0 ? sw_to_ : 1e-6;
      scope.param("from", from);
      scope.param("to", to);
      scope.param("knn", sw_knn_);
      auto sigmas = log_spaced(from, to, sw_steps_);
      rows = dirac_sweep_sigma(data.graph, cloud, tree, sw_p_, sw_knn_, sw_p_norm_, sigmas,
                               sw_common_.threads);
    }

    json report;
    report["family"] = sw_family_;
    report["rows"] = json::array();
    for (const auto& row : rows) {
      json r;
      r["parameter"] = row.parameter;
      r["max_abs_src"] = row.max_abs_src;
      r["max_abs_orc"] = row.max_abs_orc;
      if (row.envelope) r["envelope"] = *row.envelope;
      report["rows"].push_back(std::move(r));
    }
    report["terminal_max_abs_src"] = rows.back().max_abs_src;
    report["terminal_max_abs_orc"] = rows.back().max_abs_orc;
    write_json_file(scope.output("dirac_sweep.json"), report);
    scope.finish();
    std::cout << "dirac-sweep " << sw_family_ << ": terminal max |kappa| src="
              << rows.back().max_abs_src << " orc=" << rows.back().max_abs_orc << " -> "
              << scope.path("dirac_sweep.json") << "\n";
  }

  void run_hist() {
    RunScope scope("diag hist", hist_common_.out, hist_common_.threads);
    scope.manifest.seed = hist_field_.tree_seed;
    scope.param("bins", hist_bins_);
    hist_field_.record(scope);
    hist_measure_.record(scope);
    auto data = load_graph(scope, hist_graph_);
    auto cloud = hist_measure_.load_cloud(scope);
    FieldDetail detail = compute_field_detail(data.graph, hist_field_, hist_measure_.spec(),
                                              cloud ? &*cloud : nullptr, hist_common_.threads);
    Histogram hist = curvature_histogram(detail.field, hist_bins_);
    json report;
    report["params"] = field_params_json(detail.field);
    report["stats"] = stats_json(summarize(detail.field.kappa));
    report["histogram"] = histogram_json(hist);
    write_json_file(scope.output("histogram.json"), report);
    scope.finish();
    std::cout << "hist " << detail.field.method << ": " << hist_bins_ << " bins -> "
              << scope.path("histogram.json") << "\n";
  }

  void run_tree_robust() {
    RunScope scope("diag tree-robust", tr_common_.out, tr_common_.threads);
    scope.manifest.seed = tr_seed_;
    scope.param("p", tr_p_);
    scope.param("root", tr_root_);
    scope.param("seeds", tr_seeds_);
    scope.param("seed", tr_seed_);
    scope.param("bins", tr_bins_);
    tr_measure_.record(scope);
    auto data = load_graph(scope, tr_graph_);
    auto cloud = tr_measure_.load_cloud(scope);
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(tr_seeds_));
    for (int i = 0; i < tr_seeds_; ++i) seeds[i] = tr_seed_ + static_cast<std::uint64_t>(i);
    auto summaries = tree_robustness(data.graph, tr_measure_.spec(), tr_p_, tr_root_, seeds,
                                     tr_bins_, cloud ? &*cloud : nullptr, tr_common_.threads);

    json report = json::array();
    for (const auto& summary : summaries) {
      json s;
      s["mode"] = summary.mode;
      s["stats"] = stats_json(summary.stats);
      s["histogram"] = histogram_json(summary.hist);
      report.push_back(std::move(s));
    }
    TreeSpec spt;
    spt.root = tr_root_;
    DetourStats detour = detour_ratio_stats(data.graph, extract_tree(data.graph, spt));
    json wrapper;
    wrapper["modes"] = std::move(report);
    wrapper["spt_detour"] = {{"max_ratio", detour.max_ratio},
                             {"mean_ratio", detour.mean_ratio},
                             {"non_tree_edges", detour.non_tree_edges}};
    write_json_file(scope.output("tree_robustness.json"), wrapper);
    scope.finish();
    std::cout << "tree-robust: " << summaries.size() << " summaries -> "
              << scope.path("tree_robustness.json") << "\n";
  }

  void build_bench() {
    auto* cmd = app_.add_subcommand("bench", "Per-iteration flow timing across methods");
    cmd->add_option("--graph", bench_graph_, "Edge-list file")->required();
    cmd->add_option("--methods", bench_methods_, "Methods to time")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--p", bench_p_, "Transport order")->capture_default_str();
    cmd->add_option("--iters", bench_iters_, "Timed iterations per repetition")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--reps", bench_reps_, "Repetitions (median reported)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_measure_.attach(cmd);
    bench_common_.attach(cmd, /*threads_default=*/1);
    cmd->callback([this] { run_bench(); });
  }

  void run_bench() {
    RunScope scope("bench", bench_common_.out, bench_common_.threads);
    scope.param("methods", bench_methods_);
    scope.param("p", bench_p_);
    scope.param("iters", bench_iters_);
    scope.param("reps", bench_reps_);
    bench_measure_.record(scope);
    auto data = load_graph(scope, bench_graph_);
    auto cloud = bench_measure_.load_cloud(scope);

    std::vector<FlowMethod> methods;
    for (const auto& name : bench_methods_) {
      FieldFlags flags;
      flags.method = name;
      flags.p = bench_p_;
      if (name != "orc" && name != "src-spt" && name != "src-mst" && name != "src-random")
        raise(Errc::UnknownKind, "unknown method '" + name + "'");
      methods.push_back(flags.flow_method());
    }
    auto records = bench(data.graph, methods, bench_measure_.spec(), bench_iters_, bench_reps_,
                         cloud ? &*cloud : nullptr, bench_common_.threads);
    write_json_file(scope.output("bench.json"), bench_json(records));
    scope.finish();
    for (const auto& rec : records)
      std::cout << "bench " << rec.method << ": median " << rec.median_ms << " ms/iter (IQR "
                << rec.q25_ms << ".." << rec.q75_ms << ")\n";
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CliApp app;
  return app.run(argc, argv);
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.emplace_back("ricci");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& s : full) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace ricci
