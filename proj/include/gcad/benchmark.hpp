#pragma once

// Benchmark grid runner and scaleup timing harness.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gcad/pipeline.hpp"
#include "gcad/stats.hpp"
#include "gcad/syndata.hpp"

namespace gcad {

/// Parameter grid.
struct Grid {
  std::vector<std::uint32_t> depths{1, 2};
  std::vector<std::size_t> psis{2, 4, 8};
  std::vector<double> lambdas{0.5, 0.25, 0.125, 0.0625, 0.03125};
};

struct GridPoint {
  std::uint32_t h = 1;
  std::size_t psi = 8;
  double lambda = 0.5;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// A dataset for the benchmark: either a generator spec or a graph directory.
struct DatasetSource {
  std::string name;
  std::optional<SynSpec> spec;             // seed is overridden per run
  std::optional<std::filesystem::path> dir;

  AttributedGraph materialize(std::uint64_t seed) const {
    if (spec) {
      SynSpec s = *spec;
      s.seed = seed;
      return generate(s);
    }
    return load_graph(*dir).graph;
  }
};

struct GridResult {
  GridPoint point;
  std::vector<double> auc_per_seed;
  double mean_auc = 0.0;
};

struct DatasetReport {
  std::string name;
  std::vector<GridResult> grid;
  GridResult best;
  bool skipped = false;
  std::string skip_reason;
};

struct BenchmarkReport {
  std::vector<DatasetReport> datasets;
  Grid grid;
  std::vector<std::uint64_t> seeds;
  DetectorConfig detector;
  bool centralize = true;
  double seconds = 0.0;
};

/// Stage-level evaluation of one (graph, h) pair over every psi and lambda.
/// Embedding runs once per h and the detector once per psi; reweighting is
/// repeated per lambda. Results are identical to gcad_run at each point.
inline std::vector<std::pair<GridPoint, double>> evaluate_grid_on_graph(
    const AttributedGraph& g, const Grid& grid, const DetectorConfig& base, bool centralize) {
  std::vector<std::pair<GridPoint, double>> out;
  for (auto h : grid.depths) {
    const auto emb = embed_graph(g, h, centralize);
    for (auto psi : grid.psis) {
      DetectorConfig dc = base;
      dc.psi = psi;
      const auto raw = run_detector(emb, dc);
      for (auto lambda : grid.lambdas) {
        const auto final_scores = depth_weighted_scores(g, h, raw.values, lambda);
        out.push_back({GridPoint{h, psi, lambda}, auc(final_scores, g.labels())});
      }
    }
  }
  return out;
}

struct BenchmarkOptions {
  Grid grid;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  DetectorConfig detector;  // psi overridden by the grid; seed by each run seed
  bool centralize = true;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::function<void(const std::string&)> warn;
};

/// Runs the grid on every (dataset, seed) pair. Pairs are spread over a pool
/// of worker threads; each writes only its own result slot, and aggregation
/// happens afterwards on the calling thread.
inline BenchmarkReport benchmark_run(const std::vector<DatasetSource>& datasets,
                                     const BenchmarkOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  BenchmarkReport rep;
  rep.grid = opt.grid;
  rep.seeds = opt.seeds;
  rep.detector = opt.detector;
  rep.centralize = opt.centralize;

  struct Job {
    std::vector<std::pair<GridPoint, double>> results;
    bool unlabeled = false;
    std::string error;
  };
  const std::size_t n_seeds = opt.seeds.size();
  std::vector<Job> jobs(datasets.size() * n_seeds);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      const auto& ds = datasets[j / n_seeds];
      const auto seed = opt.seeds[j % n_seeds];
      try {
        const AttributedGraph g = ds.materialize(seed);
        if (!g.has_labels()) {
          jobs[j].unlabeled = true;
          continue;
        }
        DetectorConfig dc = opt.detector;
        dc.seed = seed;
        jobs[j].results = evaluate_grid_on_graph(g, opt.grid, dc, opt.centralize);
      } catch (const std::exception& e) {
        jobs[j].error = e.what();
      }
    }
  };
  std::size_t threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t d = 0; d < datasets.size(); ++d) {
    DatasetReport dr;
    dr.name = datasets[d].name;
    for (std::size_t si = 0; si < n_seeds; ++si) {
      const Job& job = jobs[d * n_seeds + si];
      if (!job.error.empty()) throw Error("dataset " + dr.name + ": " + job.error);
      if (job.unlabeled) {
        dr.skipped = true;
        dr.skip_reason = "no labels";
        break;
      }
      if (dr.grid.empty())
        for (const auto& [pt, a] : job.results) dr.grid.push_back(GridResult{pt, {}, 0.0});
      for (std::size_t i = 0; i < job.results.size(); ++i)
        dr.grid[i].auc_per_seed.push_back(job.results[i].second);
    }
    if (dr.skipped) {
      dr.grid.clear();
      if (opt.warn) opt.warn("dataset " + dr.name + " has no labels; skipped");
    } else {
      for (auto& r : dr.grid) {
        double s = 0.0;
        for (double a : r.auc_per_seed) s += a;
        r.mean_auc = s / static_cast<double>(r.auc_per_seed.size());
      }
      // First grid point wins ties, so the report is deterministic.
      dr.best = *std::max_element(dr.grid.begin(), dr.grid.end(),
                                  [](const GridResult& a, const GridResult& b) { return a.mean_auc < b.mean_auc; });
    }
    rep.datasets.push_back(std::move(dr));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline DatasetReport* find_dataset(BenchmarkReport& rep, const std::string& name) {
  for (auto& d : rep.datasets)
    if (d.name == name) return &d;
  return nullptr;
}

/// The six synthetic families with default parameters.
inline std::vector<DatasetSource> synthetic_suite() {
  std::vector<DatasetSource> out;
  for (auto f : kSyntheticSuite) {
    SynSpec s;
    s.family = f;
    out.push_back(DatasetSource{std::string(to_string(f)), s, std::nullopt});
  }
  return out;
}

inline void write_benchmark_csv(const BenchmarkReport& rep, std::ostream& out) {
  out << "dataset,h,psi,lambda,mean_auc";
  for (auto s : rep.seeds) out << ",auc_seed" << s;
  out << ",best\n";
  for (const auto& d : rep.datasets) {
    if (d.skipped) continue;
    for (const auto& r : d.grid) {
      out << d.name << ',' << r.point.h << ',' << r.point.psi << ',' << r.point.lambda << ','
          << r.mean_auc;
      for (double a : r.auc_per_seed) out << ',' << a;
      out << ',' << (r.point == d.best.point ? 1 : 0) << '\n';
    }
  }
}

inline void write_benchmark_markdown(const BenchmarkReport& rep, std::ostream& out) {
  out << "| Dataset | GCAD AUC | h | psi | lambda |\n|---|---|---|---|---|\n";
  char buf[64];
  for (const auto& d : rep.datasets) {
    if (d.skipped) {
      out << "| " << d.name << " | skipped (" << d.skip_reason << ") | | | |\n";
      continue;
    }
    std::snprintf(buf, sizeof buf, "%.2f", d.best.mean_auc);
    out << "| " << d.name << " | " << buf << " | " << d.best.point.h << " | " << d.best.point.psi
        << " | " << d.best.point.lambda << " |\n";
  }
}

// ---------------------------------------------------------------------------

struct ScaleupRow {
  std::size_t n = 0;
  std::size_t edges = 0;
  bool ok = true;
  std::string error;
  StageTimings timings;
};

/// Times gcad_run on Watts-Strogatz graphs of each size (constant degree).
/// A failing size is reported in its row; later sizes still run.
inline std::vector<ScaleupRow> scaleup_run(const std::vector<std::size_t>& sizes, const WattsParams& base,
                                           const GcadConfig& cfg, std::uint64_t seed = 0) {
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1]) throw ConfigError("scaleup sizes must be ascending");
  std::vector<ScaleupRow> rows;
  for (auto n : sizes) {
    ScaleupRow row;
    row.n = n;
    try {
      SynSpec spec;
      spec.family = SynFamily::kWatts;
      spec.seed = seed;
      spec.watts = base;
      spec.watts.n = n;
      const auto g = gen_watts(spec);
      row.edges = g.num_edges();
      row.timings = gcad_run_detailed(g, cfg).timings;
    } catch (const std::bad_alloc&) {
      row.ok = false;
      row.error = "out of memory";
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_scaleup_csv(const std::vector<ScaleupRow>& rows, std::ostream& out) {
  out << "n,edges,status,embed_s,detect_s,weight_s,rank_s,total_s\n";
  for (const auto& r : rows) {
    std::string status = r.ok ? "ok" : "failed: " + r.error;
    std::replace(status.begin(), status.end(), ',', ';');
    out << r.n << ',' << r.edges << ',' << status;
    const auto& t = r.timings;
    out << ',' << t.embed_seconds << ',' << t.detect_seconds << ',' << t.weight_seconds << ','
        << t.rank_seconds << ',' << t.total_seconds << '\n';
  }
}

}  // namespace gcad
