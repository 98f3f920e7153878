#pragma once

// Point anomaly detectors over embedded subgraph vectors.
//
// Every detector maps an n x D matrix to n scores where higher means more
// anomalous. A new detector (for instance a one-class SVM) plugs in by adding
// a DetectorKind, a `*_score(const Matrix&, const DetectorConfig&)` function
// with that contract, and a case in run_detector.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "gcad/common.hpp"
#include "gcad/random.hpp"
#include "gcad/wl_embedding.hpp"

namespace gcad {

enum class DetectorKind { kIdk, kLof, kIForest };

/// Isolation kernel partitioning. kHypersphere truncates each Voronoi cell to
/// a ball around its sample whose radius is the distance to the nearest other
/// sample; points outside every ball fall in no cell for that partitioning.
enum class IdkVariant { kHypersphere, kVoronoi };

inline std::string_view to_string(IdkVariant v) {
  return v == IdkVariant::kHypersphere ? "hypersphere" : "voronoi";
}

inline IdkVariant parse_idk_variant(std::string_view s) {
  if (s == "hypersphere") return IdkVariant::kHypersphere;
  if (s == "voronoi") return IdkVariant::kVoronoi;
  throw ConfigError("unknown IDK variant '" + std::string(s) + "' (expected hypersphere or voronoi)");
}

inline std::string_view to_string(DetectorKind k) {
  switch (k) {
    case DetectorKind::kIdk: return "idk";
    case DetectorKind::kLof: return "lof";
    case DetectorKind::kIForest: return "iforest";
  }
  return "?";
}

inline DetectorKind parse_detector_kind(std::string_view s) {
  if (s == "idk") return DetectorKind::kIdk;
  if (s == "lof") return DetectorKind::kLof;
  if (s == "iforest") return DetectorKind::kIForest;
  throw ConfigError("unknown detector '" + std::string(s) + "' (expected idk, lof or iforest)");
}

struct DetectorConfig {
  DetectorKind kind = DetectorKind::kIdk;
  std::size_t psi = 8;         // IDK sample size per partitioning
  std::size_t t = 100;         // IDK partitionings
  IdkVariant idk_variant = IdkVariant::kHypersphere;
  std::size_t lof_k = 20;      // LOF neighbourhood size
  std::size_t trees = 100;     // iForest size
  std::size_t subsample = 256; // iForest per-tree sample size
  std::uint64_t seed = 42;

  /// Checks the parameters of the selected detector against dataset size n.
  void validate(std::size_t n) const {
    switch (kind) {
      case DetectorKind::kIdk:
        if (psi < 2 || psi > n)
          throw ConfigError("psi must satisfy 2 <= psi <= n (psi=" + std::to_string(psi) +
                            ", n=" + std::to_string(n) + ")");
        if (t < 1) throw ConfigError("t must be >= 1");
        break;
      case DetectorKind::kLof:
        if (lof_k < 1 || lof_k >= n)
          throw ConfigError("lof_k must satisfy 1 <= lof_k < n (lof_k=" +
                            std::to_string(lof_k) + ", n=" + std::to_string(n) + ")");
        break;
      case DetectorKind::kIForest:
        if (trees < 1) throw ConfigError("trees must be >= 1");
        if (subsample < 2 || subsample > n)
          throw ConfigError("subsample must satisfy 2 <= subsample <= n (subsample=" +
                            std::to_string(subsample) + ", n=" + std::to_string(n) + ")");
        break;
    }
  }
};

struct ScoreVector {
  std::vector<double> values;
  DetectorKind kind = DetectorKind::kIdk;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const noexcept { return values[i]; }
};

// ---------------------------------------------------------------------------
// Isolation Distributional Kernel.

namespace detail {

/// Index (within `samples`) of the nearest sample to row x; ties go to the
/// lowest sample position.
inline std::size_t nearest_sample(const Matrix& data, std::span<const std::size_t> samples,
                                  std::span<const double> x) {
  std::size_t best = 0;
  double best_d = squared_distance(x, data.row(samples[0]));
  for (std::size_t s = 1; s < samples.size(); ++s) {
    const double d = squared_distance(x, data.row(samples[s]));
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  return best;
}

}  // namespace detail

/// Draws the sample sets of `t` partitionings, each psi distinct rows.
inline std::vector<std::vector<std::size_t>> idk_draw_partitionings(std::size_t n,
                                                                    const DetectorConfig& cfg) {
  std::vector<std::vector<std::size_t>> parts(cfg.t);
  for (std::size_t p = 0; p < cfg.t; ++p) {
    Rng rng(derive_seed(cfg.seed, p));
    parts[p] = rng.sample_without_replacement(n, cfg.psi);
  }
  return parts;
}

/// IDK scores for explicit partitionings (row indices of each sample set).
/// A row's similarity is the mean, over partitionings, of the fraction of all
/// rows that share its cell; its score is 1 - similarity. A row outside every
/// cell of a partitioning contributes zero similarity for it.
inline std::vector<double> idk_scores(const Matrix& data,
                                      const std::vector<std::vector<std::size_t>>& partitionings,
                                      IdkVariant variant = IdkVariant::kHypersphere) {
  constexpr std::uint32_t kNoCell = 0xFFFFFFFFu;
  const std::size_t n = data.rows();
  std::vector<std::uint64_t> mass(n, 0);
  std::vector<std::uint32_t> cell(n);
  std::vector<std::uint64_t> counts;
  std::vector<double> radius2;
  for (const auto& samples : partitionings) {
    const std::size_t psi = samples.size();
    radius2.assign(psi, std::numeric_limits<double>::infinity());
    if (variant == IdkVariant::kHypersphere)
      for (std::size_t a = 0; a < psi; ++a)
        for (std::size_t b = 0; b < psi; ++b)
          if (a != b)
            radius2[a] = std::min(radius2[a], squared_distance(data.row(samples[a]), data.row(samples[b])));

    counts.assign(psi, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = data.row(i);
      const std::size_t c = detail::nearest_sample(data, samples, x);
      if (squared_distance(x, data.row(samples[c])) <= radius2[c]) {
        cell[i] = static_cast<std::uint32_t>(c);
        ++counts[c];
      } else {
        cell[i] = kNoCell;
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (cell[i] != kNoCell) mass[i] += counts[cell[i]];
  }
  // Integer accumulation keeps the result independent of evaluation order.
  const double denom = static_cast<double>(n) * static_cast<double>(partitionings.size());
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) scores[i] = 1.0 - static_cast<double>(mass[i]) / denom;
  return scores;
}

inline ScoreVector idk_fit_score(const Matrix& data, const DetectorConfig& cfg) {
  DetectorConfig c = cfg;
  c.kind = DetectorKind::kIdk;
  c.validate(data.rows());
  return {idk_scores(data, idk_draw_partitionings(data.rows(), c), c.idk_variant), DetectorKind::kIdk,
          cfg.seed};
}

// ---------------------------------------------------------------------------
// Local Outlier Factor.
//
// The k-distance neighbourhood contains every point within the k-distance,
// so ties can make it larger than k. Local reachability density is
// 1 / (mean reachability distance + 1e-10), which keeps duplicate-heavy data
// finite and gives exactly 1 on an all-duplicate dataset. Neighbour search is
// exhaustive (O(n^2) distance evaluations).

inline ScoreVector lof_score(const Matrix& data, const DetectorConfig& cfg) {
  DetectorConfig c = cfg;
  c.kind = DetectorKind::kLof;
  c.validate(data.rows());
  const std::size_t n = data.rows();
  const std::size_t k = c.lof_k;

  std::vector<double> kdist(n);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> hood(n);
  std::vector<double> dist(n), scratch;
  for (std::size_t i = 0; i < n; ++i) {
    scratch.clear();
    for (std::size_t j = 0; j < n; ++j) {
      dist[j] = j == i ? 0.0 : euclidean_distance(data.row(i), data.row(j));
      if (j != i) scratch.push_back(dist[j]);
    }
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     scratch.end());
    kdist[i] = scratch[k - 1];
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && dist[j] <= kdist[i]) hood[i].emplace_back(static_cast<std::uint32_t>(j), dist[j]);
  }

  std::vector<double> lrd(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (auto [o, d] : hood[i]) sum += std::max(kdist[o], d);
    lrd[i] = 1.0 / (sum / static_cast<double>(hood[i].size()) + 1e-10);
  }

  ScoreVector out{std::vector<double>(n), DetectorKind::kLof, cfg.seed};
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (auto [o, d] : hood[i]) sum += lrd[o];
    out.values[i] = sum / static_cast<double>(hood[i].size()) / lrd[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Isolation Forest.

namespace detail {

/// Average unsuccessful-search path length in a BST of n items.
inline double average_path_length(std::size_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  const double m = static_cast<double>(n - 1);
  return 2.0 * (std::log(m) + 0.5772156649015329) - 2.0 * m / static_cast<double>(n);
}

class IsolationTree {
 public:
  IsolationTree(const Matrix& data, std::vector<std::size_t> sample, std::size_t height_limit,
                Rng& rng) {
    nodes_.reserve(2 * sample.size());
    build(data, sample, 0, sample.size(), 0, height_limit, rng);
  }

  double path_length(std::span<const double> x) const {
    std::size_t idx = 0;
    double depth = 0.0;
    while (nodes_[idx].left != kLeaf) {
      const Node& nd = nodes_[idx];
      idx = x[nd.dim] < nd.split ? nd.left : nd.right;
      depth += 1.0;
    }
    return depth + average_path_length(nodes_[idx].size);
  }

 private:
  static constexpr std::size_t kLeaf = static_cast<std::size_t>(-1);
  struct Node {
    std::size_t dim = 0;
    double split = 0.0;
    std::size_t left = kLeaf;
    std::size_t right = kLeaf;
    std::size_t size = 0;
  };

  std::size_t build(const Matrix& data, std::vector<std::size_t>& idx, std::size_t begin,
                    std::size_t end, std::size_t depth, std::size_t limit, Rng& rng) {
    const std::size_t me = nodes_.size();
    nodes_.push_back(Node{0, 0.0, kLeaf, kLeaf, end - begin});
    if (end - begin <= 1 || depth >= limit) return me;

    // Only dimensions that vary within this node are split candidates.
    candidates_.clear();
    lo_.assign(data.cols(), 0.0);
    hi_.assign(data.cols(), 0.0);
    for (std::size_t c = 0; c < data.cols(); ++c) {
      double lo = data(idx[begin], c), hi = lo;
      for (std::size_t i = begin + 1; i < end; ++i) {
        lo = std::min(lo, data(idx[i], c));
        hi = std::max(hi, data(idx[i], c));
      }
      lo_[c] = lo;
      hi_[c] = hi;
      if (lo < hi) candidates_.push_back(c);
    }
    if (candidates_.empty()) return me;

    const std::size_t dim = candidates_[static_cast<std::size_t>(rng.below(candidates_.size()))];
    const double split = lo_[dim] + rng.uniform() * (hi_[dim] - lo_[dim]);
    const auto mid = std::partition(idx.begin() + static_cast<std::ptrdiff_t>(begin),
                                    idx.begin() + static_cast<std::ptrdiff_t>(end),
                                    [&](std::size_t r) { return data(r, dim) < split; });
    const std::size_t m = static_cast<std::size_t>(mid - idx.begin());

    const std::size_t left = build(data, idx, begin, m, depth + 1, limit, rng);
    const std::size_t right = build(data, idx, m, end, depth + 1, limit, rng);
    nodes_[me].dim = dim;
    nodes_[me].split = split;
    nodes_[me].left = left;
    nodes_[me].right = right;
    return me;
  }

  std::vector<Node> nodes_;
  std::vector<std::size_t> candidates_;
  std::vector<double> lo_, hi_;
};

}  // namespace detail

inline ScoreVector iforest_score(const Matrix& data, const DetectorConfig& cfg) {
  DetectorConfig c = cfg;
  c.kind = DetectorKind::kIForest;
  c.validate(data.rows());
  const std::size_t n = data.rows();
  const auto limit = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(c.subsample))));

  std::vector<double> total(n, 0.0);
  for (std::size_t t = 0; t < c.trees; ++t) {
    Rng rng(derive_seed(c.seed, t));
    auto sample = rng.sample_without_replacement(n, c.subsample);
    const detail::IsolationTree tree(data, std::move(sample), limit, rng);
    for (std::size_t i = 0; i < n; ++i) total[i] += tree.path_length(data.row(i));
  }
  const double norm = detail::average_path_length(c.subsample);
  ScoreVector out{std::vector<double>(n), DetectorKind::kIForest, cfg.seed};
  for (std::size_t i = 0; i < n; ++i)
    out.values[i] = std::pow(2.0, -(total[i] / static_cast<double>(c.trees)) / norm);
  return out;
}

// ---------------------------------------------------------------------------

inline ScoreVector run_detector(const Matrix& data, const DetectorConfig& cfg) {
  switch (cfg.kind) {
    case DetectorKind::kIdk: return idk_fit_score(data, cfg);
    case DetectorKind::kLof: return lof_score(data, cfg);
    case DetectorKind::kIForest: return iforest_score(data, cfg);
  }
  throw ConfigError("unknown detector kind");
}

inline ScoreVector run_detector(const EmbeddingMatrix& e, const DetectorConfig& cfg) {
  return run_detector(e.values, cfg);
}

}  // namespace gcad
