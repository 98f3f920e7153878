#pragma once

// Exports the centralized h-subgraphs of the most anomalous and most normal
// nodes as JSON or Graphviz DOT, so the reason for a ranking can be drawn.
// See docs/formats.md for the JSON layout.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcad/graph.hpp"
#include "gcad/pipeline.hpp"

namespace gcad {

enum class ExplainFormat { kJson, kDot };

inline ExplainFormat parse_explain_format(std::string_view s) {
  if (s == "json") return ExplainFormat::kJson;
  if (s == "dot") return ExplainFormat::kDot;
  throw ConfigError("unknown explanation format '" + std::string(s) + "' (expected json or dot)");
}

struct Explanation {
  NodeId node = 0;
  std::size_t rank = 0;
  double score = 0.0;
  bool anomalous = false;  // drawn from the top (true) or bottom of the ranking
  std::uint32_t h = 0;
  HSubgraph subgraph;
};

/// JSON for the subgraph alone; independent of scores and detector.
inline nlohmann::ordered_json subgraph_json(const HSubgraph& sub) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < sub.size(); ++i) {
    auto row = sub.cattrs.row(i);
    nodes.push_back({{"local", i},
                     {"id", sub.nodes[i]},
                     {"hop", sub.hops[i]},
                     {"coords", std::vector<double>(row.begin(), row.end())}});
  }
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (auto [a, b] : sub.local_edges) edges.push_back({a, b});
  return {{"source", sub.source}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline std::string to_json(const Explanation& e) {
  nlohmann::ordered_json j;
  j["node"] = e.node;
  j["kind"] = e.anomalous ? "anomalous" : "normal";
  j["rank"] = e.rank;
  j["score"] = e.score;
  j["h"] = e.h;
  j["dim"] = e.subgraph.cattrs.cols();
  j["subgraph"] = subgraph_json(e.subgraph);
  return j.dump(2) + "\n";
}

/// DOT graph; the source node is filled red. With 2-D node vectors every node
/// is pinned at its centralized coordinates (use `neato -n`).
inline std::string to_dot(const Explanation& e) {
  const auto& sub = e.subgraph;
  const bool planar = sub.cattrs.cols() == 2;
  std::string out;
  char buf[256];
  out += "graph node_" + std::to_string(e.node) + " {\n";
  std::snprintf(buf, sizeof buf, "  label=\"node %u (%s) rank %zu score %.6g\";\n", e.node,
                e.anomalous ? "anomalous" : "normal", e.rank, e.score);
  out += buf;
  out += "  node [shape=circle];\n";
  for (std::size_t i = 0; i < sub.size(); ++i) {
    out += "  n" + std::to_string(i) + " [label=\"" + std::to_string(sub.nodes[i]) + "\"";
    if (i == 0) out += ", style=filled, fillcolor=red";
    if (planar) {
      auto r = sub.cattrs.row(i);
      std::snprintf(buf, sizeof buf, ", pos=\"%.17g,%.17g!\"", r[0], r[1]);
      out += buf;
    }
    out += "];\n";
  }
  for (auto [a, b] : sub.local_edges)
    out += "  n" + std::to_string(a) + " -- n" + std::to_string(b) + ";\n";
  out += "}\n";
  return out;
}

/// Selects the k_top highest-ranked and k_bottom lowest-ranked nodes
/// (most normal first) and extracts their centralized h-subgraphs.
inline std::vector<Explanation> select_explanations(const AttributedGraph& g, const Ranking& r,
                                                    std::uint32_t h, std::size_t k_top,
                                                    std::size_t k_bottom) {
  const std::size_t n = r.order.size();
  if (n != g.num_nodes()) throw ValidationError("ranking does not match graph");
  if (k_top + k_bottom > n)
    throw ConfigError("k_top + k_bottom (" + std::to_string(k_top + k_bottom) +
                      ") exceeds node count " + std::to_string(n));
  SubgraphExtractor ex(g);
  std::vector<Explanation> out;
  auto add = [&](NodeId u, bool anomalous) {
    out.push_back(Explanation{u, r.rank[u], r.scores[u], anomalous, h, ex.extract(u, h)});
  };
  for (std::size_t i = 0; i < k_top; ++i) add(r.order[i], true);
  for (std::size_t i = 0; i < k_bottom; ++i) add(r.order[n - 1 - i], false);
  return out;
}

/// Writes one file per explanation into `dir`; returns the paths written.
/// Names: anomalous_<i>_node<id>.<ext> and normal_<i>_node<id>.<ext>, i 1-based.
inline std::vector<std::filesystem::path> export_explanations(
    const AttributedGraph& g, const Ranking& r, std::uint32_t h, std::size_t k_top,
    std::size_t k_bottom, ExplainFormat fmt, const std::filesystem::path& dir) {
  const auto items = select_explanations(g, r, h, k_top, k_bottom);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  std::size_t top_i = 0, bottom_i = 0;
  for (const auto& e : items) {
    const std::size_t idx = e.anomalous ? ++top_i : ++bottom_i;
    const std::string name = std::string(e.anomalous ? "anomalous_" : "normal_") + std::to_string(idx) +
                             "_node" + std::to_string(e.node) + (fmt == ExplainFormat::kJson ? ".json" : ".dot");
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << (fmt == ExplainFormat::kJson ? to_json(e) : to_dot(e));
    written.push_back(path);
  }
  return written;
}

}  // namespace gcad
