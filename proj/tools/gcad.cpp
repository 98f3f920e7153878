// gcad command-line tool: detect, generate, benchmark, scaleup, explain.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcad/benchmark.hpp"
#include "gcad/explain.hpp"
#include "gcad/pipeline.hpp"
#include "gcad/scores_io.hpp"
#include "gcad/spec_json.hpp"

namespace fs = std::filesystem;
using namespace gcad;

namespace {

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

AttributedGraph load_with_warnings(const fs::path& dir) {
  auto loaded = load_graph(dir);
  if (loaded.stats.self_loops_dropped)
    warn(std::to_string(loaded.stats.self_loops_dropped) + " self-loop(s) dropped");
  if (loaded.stats.duplicates_merged)
    warn(std::to_string(loaded.stats.duplicates_merged) + " duplicate edge(s) merged");
  return std::move(loaded.graph);
}

struct DetectorFlags {
  std::string kind = "idk";
  std::string idk_variant = "hypersphere";
  DetectorConfig cfg;

  void add(CLI::App* app) {
    app->add_option("--detector", kind, "idk, lof or iforest")->capture_default_str();
    app->add_option("--psi", cfg.psi, "IDK sample size")->capture_default_str();
    app->add_option("--t", cfg.t, "IDK partitionings")->capture_default_str();
    app->add_option("--idk-variant", idk_variant, "hypersphere or voronoi")->capture_default_str();
    app->add_option("--lof-k", cfg.lof_k, "LOF neighbours")->capture_default_str();
    app->add_option("--trees", cfg.trees, "iForest trees")->capture_default_str();
    app->add_option("--subsample", cfg.subsample, "iForest subsample size")->capture_default_str();
    app->add_option("--seed", cfg.seed, "detector seed")->capture_default_str();
  }

  DetectorConfig resolve() const {
    DetectorConfig c = cfg;
    c.kind = parse_detector_kind(kind);
    c.idk_variant = parse_idk_variant(idk_variant);
    return c;
  }
};

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  detail::split_commas(s, [&](std::string_view tok) { out.push_back(detail::parse_field<std::size_t>(tok, "--sizes", 1)); });
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-centric anomaly detection on attributed graphs"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  // detect
  auto* detect = app.add_subcommand("detect", "Score every node of a graph directory");
  fs::path d_graph, d_out, d_emb;
  GcadConfig d_cfg;
  DetectorFlags d_det;
  std::optional<std::size_t> d_top_m;
  std::optional<double> d_tau;
  bool d_no_center = false;
  detect->add_option("--graph", d_graph, "graph directory")->required();
  detect->add_option("--out", d_out, "scores CSV")->required();
  detect->add_option("--h", d_cfg.h, "subgraph depth")->capture_default_str();
  detect->add_option("--lambda", d_cfg.lambda, "depth weight in [0,1)")->capture_default_str();
  detect->add_option("--top-m", d_top_m, "print the m highest-scoring nodes");
  detect->add_option("--tau", d_tau, "print nodes whose score exceeds tau");
  detect->add_option("--dump-embeddings", d_emb, "write subgraph embeddings as CSV");
  detect->add_flag("--no-centralize", d_no_center, "use raw attributes (ablation)");
  d_det.add(detect);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic graph directory");
  std::string g_family = "sbm_stru";
  std::uint64_t g_seed = 0;
  fs::path g_out, g_spec;
  gen->add_option("--family", g_family, "watts, sbm_stru, rgg_s, rgg_l, lattice_l, lattice_s, citation")
      ->capture_default_str();
  gen->add_option("--seed", g_seed)->capture_default_str();
  gen->add_option("--spec", g_spec, "spec.json with parameter overrides");
  gen->add_option("--out", g_out, "output directory")->required();

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Run the parameter grid and report AUC");
  std::string b_suite = "synthetic";
  std::vector<fs::path> b_graphs;
  std::size_t b_seeds = 5, b_threads = 0;
  fs::path b_out;
  DetectorFlags b_det;
  bool b_no_center = false;
  bench->add_option("--suite", b_suite, "synthetic or none")->capture_default_str();
  bench->add_option("--graph", b_graphs, "additional labeled graph directories");
  bench->add_option("--seeds", b_seeds, "seeds 0..N-1")->capture_default_str();
  bench->add_option("--threads", b_threads, "worker threads (0: all cores)")->capture_default_str();
  bench->add_option("--out", b_out, "report directory")->required();
  bench->add_flag("--no-centralize", b_no_center, "use raw attributes (ablation)");
  b_det.add(bench);

  // scaleup
  auto* scale = app.add_subcommand("scaleup", "Time the pipeline on growing Watts-Strogatz graphs");
  std::string s_sizes = "1000,10000,100000";
  fs::path s_out;
  GcadConfig s_cfg;
  DetectorFlags s_det;
  std::uint64_t s_graph_seed = 0;
  scale->add_option("--sizes", s_sizes, "comma-separated ascending node counts")->capture_default_str();
  scale->add_option("--out", s_out, "timing CSV")->required();
  scale->add_option("--h", s_cfg.h)->capture_default_str();
  scale->add_option("--lambda", s_cfg.lambda)->capture_default_str();
  scale->add_option("--graph-seed", s_graph_seed)->capture_default_str();
  s_det.add(scale);

  // explain
  auto* expl = app.add_subcommand("explain", "Export h-subgraphs of top and bottom ranked nodes");
  fs::path e_graph, e_run, e_out;
  std::uint32_t e_h = 1;
  std::size_t e_top = 2, e_bottom = 2;
  std::string e_format = "json";
  expl->add_option("--graph", e_graph, "graph directory")->required();
  expl->add_option("--run", e_run, "scores CSV from detect")->required();
  expl->add_option("--h", e_h, "subgraph depth")->capture_default_str();
  expl->add_option("--top", e_top)->capture_default_str();
  expl->add_option("--bottom", e_bottom)->capture_default_str();
  expl->add_option("--format", e_format, "json or dot")->capture_default_str();
  expl->add_option("--out", e_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*detect) {
      const auto g = load_with_warnings(d_graph);
      d_cfg.detector = d_det.resolve();
      d_cfg.top_m = d_top_m;
      d_cfg.tau = d_tau;
      d_cfg.centralize = !d_no_center;
      const auto res = gcad_run_detailed(g, d_cfg);
      write_scores_csv(res.ranking, d_out);
      if (!d_emb.empty()) write_embeddings_csv(res.embeddings, d_emb);
      if (res.ranking.flagged)
        for (auto u : *res.ranking.flagged) std::cout << u << '\n';
    } else if (*gen) {
      SynSpec spec;
      if (!g_spec.empty()) {
        std::ifstream in(g_spec);
        if (!in) throw Error("cannot open " + g_spec.string());
        spec = spec_from_json(nlohmann::json::parse(in));
      } else {
        spec.family = parse_syn_family(g_family);
      }
      if (gen->count("--seed") || g_spec.empty()) spec.seed = g_seed;
      const auto g = generate_to_dir(spec, g_out);
      std::size_t anomalies = 0;
      for (auto l : g.labels()) anomalies += l;
      std::cerr << to_string(spec.family) << ": " << g.num_nodes() << " nodes, " << g.num_edges()
                << " edges, " << anomalies << " anomalies\n";
    } else if (*bench) {
      std::vector<DatasetSource> datasets;
      if (b_suite == "synthetic") datasets = synthetic_suite();
      else if (b_suite != "none") throw ConfigError("unknown suite '" + b_suite + "'");
      for (const auto& dir : b_graphs) datasets.push_back(DatasetSource{dir.filename().string(), std::nullopt, dir});
      if (datasets.empty()) throw ConfigError("no datasets selected");
      BenchmarkOptions opt;
      opt.seeds.clear();
      for (std::uint64_t s = 0; s < b_seeds; ++s) opt.seeds.push_back(s);
      opt.detector = b_det.resolve();
      opt.centralize = !b_no_center;
      opt.threads = b_threads;
      opt.warn = warn;
      const auto rep = benchmark_run(datasets, opt);
      fs::create_directories(b_out);
      std::ofstream csv(b_out / "benchmark.csv");
      write_benchmark_csv(rep, csv);
      std::ofstream md(b_out / "benchmark.md");
      write_benchmark_markdown(rep, md);
      write_benchmark_markdown(rep, std::cout);
      std::fprintf(stderr, "%.1f s\n", rep.seconds);
    } else if (*scale) {
      s_cfg.detector = s_det.resolve();
      const auto rows = scaleup_run(parse_sizes(s_sizes), WattsParams{}, s_cfg, s_graph_seed);
      std::ofstream out(s_out);
      if (!out) throw Error("cannot write " + s_out.string());
      write_scaleup_csv(rows, out);
      write_scaleup_csv(rows, std::cout);
      for (const auto& r : rows)
        if (!r.ok) return 1;
    } else if (*expl) {
      const auto g = load_with_warnings(e_graph);
      const auto ranking = read_scores_csv(e_run);
      const auto files = export_explanations(g, ranking, e_h, e_top, e_bottom, parse_explain_format(e_format), e_out);
      for (const auto& f : files) std::cout << f.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
