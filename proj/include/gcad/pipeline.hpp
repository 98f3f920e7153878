#pragma once

// End-to-end GCAD: extract & centralize subgraphs, embed, score with a point
// detector, then aggregate with the depth-based weighted score.

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcad/common.hpp"
#include "gcad/detectors.hpp"
#include "gcad/graph.hpp"
#include "gcad/wl_embedding.hpp"

namespace gcad {

struct GcadConfig {
  std::uint32_t h = 1;
  double lambda = 0.5;
  DetectorConfig detector;
  std::optional<std::size_t> top_m;
  std::optional<double> tau;  // raw final-score threshold; flags score > tau
  bool centralize = true;     // false only for ablation runs

  void validate(std::size_t n) const {
    if (!(lambda >= 0.0 && lambda < 1.0))
      throw ConfigError("lambda must satisfy 0 <= lambda < 1");
    if (top_m && tau) throw ConfigError("at most one of top_m and tau may be set");
    if (top_m && *top_m > n)
      throw ConfigError("top_m (" + std::to_string(*top_m) + ") exceeds node count " +
                        std::to_string(n));
    detector.validate(n);
  }
};

struct Ranking {
  std::vector<double> scores;            // final scores, node-index order
  std::vector<NodeId> order;             // most anomalous first
  std::vector<std::size_t> rank;         // 1-based rank of each node
  std::optional<std::vector<NodeId>> flagged;
};

/// Sorts by descending score; equal scores keep ascending node index.
inline Ranking make_ranking(std::vector<double> scores) {
  Ranking r;
  const std::size_t n = scores.size();
  r.order.resize(n);
  std::iota(r.order.begin(), r.order.end(), NodeId{0});
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](NodeId a, NodeId b) { return scores[a] > scores[b]; });
  r.rank.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.rank[r.order[i]] = i + 1;
  r.scores = std::move(scores);
  return r;
}

namespace detail {
inline std::vector<double> lambda_powers(double lambda, std::size_t h) {
  std::vector<double> w(h + 1, 1.0);  // 0^0 = 1
  for (std::size_t i = 1; i <= h; ++i) w[i] = w[i - 1] * lambda;
  return w;
}
}  // namespace detail

/// Depth-based weighted scores from materialized subgraphs: every subgraph
/// with source v contributes lambda^hop(v,u) * y_v to each member u.
inline std::vector<double> depth_weighted_scores(std::span<const HSubgraph> subs,
                                                 std::span<const double> raw, double lambda) {
  if (raw.size() != subs.size()) throw ValidationError("score vector does not match subgraphs");
  std::uint32_t max_hop = 0;
  for (const auto& s : subs)
    for (auto hop : s.hops) max_hop = std::max(max_hop, hop);
  const auto w = detail::lambda_powers(lambda, max_hop);

  std::vector<double> num(raw.size(), 0.0), den(raw.size(), 0.0);
  for (const auto& s : subs) {
    const double y = raw[s.source];
    for (std::size_t i = 0; i < s.size(); ++i) {
      num[s.nodes[i]] += w[s.hops[i]] * y;
      den[s.nodes[i]] += w[s.hops[i]];
    }
  }
  for (std::size_t u = 0; u < raw.size(); ++u) num[u] /= den[u];
  return num;
}

/// Same quantity computed per node by a BFS of depth h around it, so no
/// subgraphs need to be kept.
inline std::vector<double> depth_weighted_scores(const AttributedGraph& g, std::uint32_t h,
                                                 std::span<const double> raw, double lambda) {
  if (raw.size() != g.num_nodes()) throw ValidationError("score vector does not match graph");
  const auto w = detail::lambda_powers(lambda, h);
  std::vector<double> out(raw.size());
  SubgraphExtractor ex(g);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    double num = 0.0, den = 0.0;
    ex.for_each_within(u, h, [&](NodeId v, std::uint32_t hop) {
      num += w[hop] * raw[v];
      den += w[hop];
    });
    out[u] = num / den;
  }
  return out;
}

/// Flags the m best-ranked nodes.
inline std::vector<NodeId> flag_top_m(const Ranking& r, std::size_t m) {
  if (m > r.order.size())
    throw ConfigError("top_m (" + std::to_string(m) + ") exceeds node count " +
                      std::to_string(r.order.size()));
  return {r.order.begin(), r.order.begin() + static_cast<std::ptrdiff_t>(m)};
}

/// Flags nodes whose final score exceeds tau, in rank order.
inline std::vector<NodeId> flag_above(const Ranking& r, double tau) {
  std::vector<NodeId> out;
  for (NodeId u : r.order) {
    if (r.scores[u] > tau) out.push_back(u);
    else break;
  }
  return out;
}

inline std::vector<NodeId> flag_anomalies(const Ranking& r, std::optional<std::size_t> top_m,
                                          std::optional<double> tau) {
  if (top_m.has_value() == tau.has_value())
    throw ConfigError("exactly one of top_m and tau must be given");
  return top_m ? flag_top_m(r, *top_m) : flag_above(r, *tau);
}

struct StageTimings {
  double embed_seconds = 0.0;  // extraction, centralization and WL embedding
  double detect_seconds = 0.0;
  double weight_seconds = 0.0;
  double rank_seconds = 0.0;
  double total_seconds = 0.0;
};

struct GcadResult {
  EmbeddingMatrix embeddings;
  ScoreVector raw;
  Ranking ranking;
  StageTimings timings;
};

inline GcadResult gcad_run_detailed(const AttributedGraph& g, const GcadConfig& cfg) {
  cfg.validate(g.num_nodes());
  using Clock = std::chrono::steady_clock;
  auto secs = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };

  GcadResult res;
  const auto t0 = Clock::now();
  res.embeddings = embed_graph(g, cfg.h, cfg.centralize);
  const auto t1 = Clock::now();
  res.raw = run_detector(res.embeddings, cfg.detector);
  const auto t2 = Clock::now();
  auto final_scores = depth_weighted_scores(g, cfg.h, res.raw.values, cfg.lambda);
  const auto t3 = Clock::now();
  res.ranking = make_ranking(std::move(final_scores));
  if (cfg.top_m || cfg.tau) res.ranking.flagged = flag_anomalies(res.ranking, cfg.top_m, cfg.tau);
  const auto t4 = Clock::now();

  res.timings = {secs(t0, t1), secs(t1, t2), secs(t2, t3), secs(t3, t4), secs(t0, t4)};
  return res;
}

inline Ranking gcad_run(const AttributedGraph& g, const GcadConfig& cfg) {
  return gcad_run_detailed(g, cfg).ranking;
}

}  // namespace gcad
