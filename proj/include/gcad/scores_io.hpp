#pragma once

// scores.csv (node,score,rank) and embedding dumps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gcad/graph.hpp"
#include "gcad/pipeline.hpp"

namespace gcad {

inline void write_scores_csv(const Ranking& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "node,score,rank\n";
  for (std::size_t u = 0; u < r.scores.size(); ++u)
    out << u << ',' << detail::format_double(r.scores[u]) << ',' << r.rank[u] << '\n';
}

/// Reads scores.csv back. Rows must be in node order 0..n-1; ranks are
/// recomputed from the scores and checked against the file.
inline Ranking read_scores_csv(const std::filesystem::path& path) {
  std::vector<double> scores;
  std::vector<std::size_t> ranks;
  bool header = true;
  detail::for_each_line(path, [&](std::string_view line, std::size_t lineno) {
    if (header) {
      header = false;
      if (detail::trim(line) != "node,score,rank")
        throw ParseError(path.string(), lineno, "expected header node,score,rank");
      return;
    }
    std::vector<std::string_view> f;
    detail::split_commas(line, [&](std::string_view tok) { f.push_back(tok); });
    if (f.size() != 3) throw ParseError(path.string(), lineno, "expected 3 fields");
    const auto node = detail::parse_field<std::size_t>(f[0], path.string(), lineno);
    if (node != scores.size()) throw ParseError(path.string(), lineno, "rows must be in node order");
    scores.push_back(detail::parse_field<double>(f[1], path.string(), lineno));
    ranks.push_back(detail::parse_field<std::size_t>(f[2], path.string(), lineno));
  });
  Ranking r = make_ranking(std::move(scores));
  if (r.rank != ranks) throw ValidationError(path.string() + ": ranks are inconsistent with scores");
  return r;
}

/// One row per node, no header.
inline void write_embeddings_csv(const EmbeddingMatrix& e, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (std::size_t i = 0; i < e.rows(); ++i) {
    auto r = e.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out << (j ? "," : "") << detail::format_double(r[j]);
    out << '\n';
  }
}

}  // namespace gcad
