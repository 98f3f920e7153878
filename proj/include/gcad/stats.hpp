#pragma once

// Rank statistics used by the evaluation harness: ROC AUC via the
// Mann-Whitney U statistic and the exact Wilcoxon signed-rank test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "gcad/common.hpp"

namespace gcad {

/// 1-based ranks with ties replaced by their average rank.
inline std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && x[idx[j]] == x[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + 1 + j);  // mean of i+1 .. j
    for (std::size_t t = i; t < j; ++t) ranks[idx[t]] = r;
    i = j;
  }
  return ranks;
}

/// Area under the ROC curve; label 1 marks a positive (anomaly).
inline double auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw ValidationError("scores and labels differ in length");
  for (double s : scores)
    if (!std::isfinite(s)) throw NumericError("non-finite score passed to auc");
  std::size_t pos = 0;
  for (auto l : labels) pos += l ? 1 : 0;
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw ValidationError("auc needs both positive and negative labels");

  const auto ranks = average_ranks(scores);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i]) rank_sum += ranks[i];
  const double np = static_cast<double>(pos), nn = static_cast<double>(neg);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

struct WilcoxonResult {
  double p_value = 1.0;
  double w_plus = 0.0;       // sum of ranks of positive differences
  std::size_t n_used = 0;    // pairs left after dropping zero differences
  bool all_zero = false;
};

/// Exact one-sided Wilcoxon signed-rank test of "a tends to exceed b".
/// Zero differences are dropped and tied |differences| share average ranks.
/// The null distribution of W+ is computed exactly over all 2^m sign
/// assignments (by dynamic programming on doubled ranks).
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("wilcoxon: samples differ in length");
  if (a.size() < 5) throw ValidationError("wilcoxon: need at least 5 pairs");

  std::vector<double> diff, absd;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) {
      diff.push_back(d);
      absd.push_back(std::abs(d));
    }
  }
  WilcoxonResult res;
  res.n_used = diff.size();
  if (diff.empty()) {
    res.all_zero = true;
    return res;
  }

  const auto ranks = average_ranks(absd);
  std::vector<std::size_t> twice(ranks.size());
  std::size_t observed2 = 0, total2 = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    twice[i] = static_cast<std::size_t>(std::lround(2.0 * ranks[i]));
    total2 += twice[i];
    if (diff[i] > 0) observed2 += twice[i];
  }
  res.w_plus = static_cast<double>(observed2) / 2.0;

  // ways[s] = number of sign assignments whose doubled W+ equals s.
  std::vector<double> ways(total2 + 1, 0.0);
  ways[0] = 1.0;
  std::size_t reach = 0;
  for (auto r : twice) {
    for (std::size_t s = reach + 1; s-- > 0;)
      if (ways[s] != 0.0) ways[s + r] += ways[s];
    reach += r;
  }
  double tail = 0.0;
  for (std::size_t s = observed2; s <= total2; ++s) tail += ways[s];
  res.p_value = tail / std::ldexp(1.0, static_cast<int>(diff.size()));
  return res;
}

}  // namespace gcad
