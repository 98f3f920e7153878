#pragma once

// Attributed networks, h-subgraph extraction and subgraph centralization.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gcad/common.hpp"

namespace gcad {

using Edge = std::pair<NodeId, NodeId>;

/// Undirected simple graph with a dense node attribute matrix and optional
/// 0/1 anomaly labels. Immutable once constructed.
class AttributedGraph {
 public:
  struct BuildStats {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_merged = 0;
  };

  AttributedGraph() = default;

  /// Builds and validates a graph. Node count is attrs.rows(). Self-loops are
  /// dropped; reversed or repeated pairs are merged unless `merge_duplicates`
  /// is false, in which case they are rejected.
  static AttributedGraph build(std::vector<Edge> edges, Matrix attrs,
                               std::optional<std::vector<std::uint8_t>> labels = {},
                               bool merge_duplicates = true,
                               BuildStats* stats = nullptr) {
    const std::size_t n = attrs.rows();
    if (n > 0 && attrs.cols() == 0)
      throw ValidationError("attribute matrix must have at least one column");
    for (double x : attrs.data())
      if (!std::isfinite(x)) throw ValidationError("non-finite attribute value");
    if (labels) {
      if (labels->size() != n)
        throw ValidationError("labels length " + std::to_string(labels->size()) +
                              " does not match node count " + std::to_string(n));
      for (auto l : *labels)
        if (l > 1) throw ValidationError("labels must be 0 or 1");
    }

    BuildStats local;
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (auto [u, v] : edges) {
      if (u >= n || v >= n)
        throw ValidationError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                              ") has endpoint >= node count " + std::to_string(n));
      if (u == v) {
        ++local.self_loops_dropped;
        continue;
      }
      canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    const auto last = std::unique(canon.begin(), canon.end());
    local.duplicates_merged = static_cast<std::size_t>(canon.end() - last);
    if (!merge_duplicates && local.duplicates_merged > 0)
      throw ValidationError("duplicate edges present");
    canon.erase(last, canon.end());

    AttributedGraph g;
    g.n_ = n;
    g.attrs_ = std::move(attrs);
    g.labels_ = std::move(labels);
    g.edges_ = std::move(canon);

    // CSR; edges are sorted, so each adjacency list ends up ascending after
    // the counting pass below.
    g.offsets_.assign(n + 1, 0);
    for (auto [u, v] : g.edges_) {
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.adjacency_.resize(2 * g.edges_.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : g.edges_) {
      g.adjacency_[cursor[u]++] = v;
      g.adjacency_[cursor[v]++] = u;
    }
    for (std::size_t i = 0; i < n; ++i)
      std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));

    if (stats) *stats = local;
    return g;
  }

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t dim() const noexcept { return attrs_.cols(); }

  /// Edges as (min, max) pairs in lexicographic order.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Matrix& attrs() const noexcept { return attrs_; }
  std::span<const double> attr(NodeId u) const noexcept { return attrs_.row(u); }

  bool has_labels() const noexcept { return labels_.has_value(); }
  const std::vector<std::uint8_t>& labels() const {
    if (!labels_) throw ValidationError("graph has no labels");
    return *labels_;
  }

  std::span<const NodeId> neighbors(NodeId u) const noexcept {
    return {adjacency_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::size_t degree(NodeId u) const noexcept { return offsets_[u + 1] - offsets_[u]; }

  bool has_edge(NodeId u, NodeId v) const noexcept {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  AttributedGraph with_attrs(Matrix attrs) const {
    return build(edges_, std::move(attrs), labels_);
  }
  AttributedGraph with_labels(std::vector<std::uint8_t> labels) const {
    return build(edges_, attrs_, std::move(labels));
  }

  /// Copy with every attribute vector translated by `c`.
  AttributedGraph shifted(std::span<const double> c) const {
    if (c.size() != dim()) throw ValidationError("shift vector has wrong dimension");
    Matrix m = attrs_;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < dim(); ++j) m(i, j) += c[j];
    return with_attrs(std::move(m));
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  Matrix attrs_;
  std::optional<std::vector<std::uint8_t>> labels_;
};

/// A centralized h-subgraph. Index 0 is always the source node.
struct HSubgraph {
  NodeId source = 0;
  std::vector<NodeId> nodes;
  std::vector<std::uint32_t> hops;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> local_edges;  // (i < j)
  Matrix cattrs;

  std::size_t size() const noexcept { return nodes.size(); }
  friend bool operator==(const HSubgraph&, const HSubgraph&) = default;
};

/// Reusable BFS workspace over one graph. Each query costs time proportional
/// to the explored region, not to the graph size.
class SubgraphExtractor {
 public:
  explicit SubgraphExtractor(const AttributedGraph& g)
      : g_(&g), local_(g.num_nodes(), kUnseen) {}

  /// Calls visit(node, hop) for every node within `h` hops of `v`, in BFS
  /// order with ascending-index tie-break.
  template <typename Visit>
  void for_each_within(NodeId v, std::uint32_t h, Visit&& visit) {
    bfs(v, h);
    for (std::size_t i = 0; i < order_.size(); ++i) visit(order_[i], hops_[i]);
    reset();
  }

  /// Extracts the h-subgraph rooted at v. With `centralize` the source
  /// attribute vector is subtracted from every member; otherwise raw
  /// attributes are copied (used for ablation only).
  HSubgraph extract(NodeId v, std::uint32_t h, bool centralize = true) {
    if (v >= g_->num_nodes())
      throw ValidationError("source node " + std::to_string(v) + " out of range");
    bfs(v, h);

    HSubgraph sub;
    sub.source = v;
    sub.nodes = order_;
    sub.hops = hops_;

    for (std::uint32_t i = 0; i < order_.size(); ++i) {
      for (NodeId w : g_->neighbors(order_[i])) {
        const std::uint32_t j = local_[w];
        if (j != kUnseen && j > i) sub.local_edges.emplace_back(i, j);
      }
    }
    std::sort(sub.local_edges.begin(), sub.local_edges.end());

    const std::size_t d = g_->dim();
    sub.cattrs = Matrix(order_.size(), d);
    const auto origin = g_->attr(v);
    for (std::size_t i = 0; i < order_.size(); ++i) {
      const auto x = g_->attr(order_[i]);
      auto out = sub.cattrs.row(i);
      for (std::size_t c = 0; c < d; ++c) out[c] = centralize ? x[c] - origin[c] : x[c];
    }
    reset();
    return sub;
  }

 private:
  static constexpr std::uint32_t kUnseen = 0xFFFFFFFFu;

  void bfs(NodeId v, std::uint32_t h) {
    order_.clear();
    hops_.clear();
    order_.push_back(v);
    hops_.push_back(0);
    local_[v] = 0;
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const std::uint32_t depth = hops_[head];
      if (depth == h) break;  // BFS order: all remaining entries are at depth h too
      for (NodeId w : g_->neighbors(order_[head])) {
        if (local_[w] != kUnseen) continue;
        local_[w] = static_cast<std::uint32_t>(order_.size());
        order_.push_back(w);
        hops_.push_back(depth + 1);
      }
    }
  }

  void reset() {
    for (NodeId u : order_) local_[u] = kUnseen;
  }

  const AttributedGraph* g_;
  std::vector<std::uint32_t> local_;
  std::vector<NodeId> order_;
  std::vector<std::uint32_t> hops_;
};

inline HSubgraph extract_h_subgraph(const AttributedGraph& g, NodeId v, std::uint32_t h) {
  SubgraphExtractor ex(g);
  return ex.extract(v, h);
}

/// Extracts and centralizes the h-subgraph of every node, in source order.
inline std::vector<HSubgraph> sec(const AttributedGraph& g, std::uint32_t h,
                                  bool centralize = true) {
  SubgraphExtractor ex(g);
  std::vector<HSubgraph> out;
  out.reserve(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) out.push_back(ex.extract(v, h, centralize));
  return out;
}

// ---------------------------------------------------------------------------
// Graph directory I/O: edges.csv, attrs.csv, optional labels.csv.

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_field(std::string_view tok, const std::string& file, std::size_t line) {
  tok = trim(tok);
  T value{};
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (tok.empty() || ec != std::errc() || ptr != end)
    throw ParseError(file, line, "cannot parse field '" + std::string(tok) + "'");
  return value;
}

template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (t.empty()) continue;
    fn(t, lineno);
  }
}

template <typename Fn>
void split_commas(std::string_view s, Fn&& fn) {
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    fn(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
}

}  // namespace detail

struct LoadedGraph {
  AttributedGraph graph;
  AttributedGraph::BuildStats stats;
};

inline LoadedGraph load_graph(const std::filesystem::path& dir, bool merge_duplicates = true) {
  const auto edges_path = dir / "edges.csv";
  const auto attrs_path = dir / "attrs.csv";
  const auto labels_path = dir / "labels.csv";

  std::vector<double> values;
  std::size_t rows = 0, cols = 0;
  detail::for_each_line(attrs_path, [&](std::string_view line, std::size_t lineno) {
    std::size_t c = 0;
    detail::split_commas(line, [&](std::string_view tok) {
      values.push_back(detail::parse_field<double>(tok, attrs_path.string(), lineno));
      ++c;
    });
    if (rows == 0) cols = c;
    else if (c != cols)
      throw ValidationError(attrs_path.string() + ":" + std::to_string(lineno) +
                            ": ragged attribute row (" + std::to_string(c) +
                            " columns, expected " + std::to_string(cols) + ")");
    ++rows;
  });

  std::vector<Edge> edges;
  detail::for_each_line(edges_path, [&](std::string_view line, std::size_t lineno) {
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
      throw ParseError(edges_path.string(), lineno, "expected 'u,v'");
    const auto u = detail::parse_field<std::uint64_t>(line.substr(0, comma), edges_path.string(), lineno);
    const auto v = detail::parse_field<std::uint64_t>(line.substr(comma + 1), edges_path.string(), lineno);
    if (u >= rows || v >= rows)
      throw ValidationError(edges_path.string() + ":" + std::to_string(lineno) +
                            ": endpoint out of range for " + std::to_string(rows) + " nodes");
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  });

  std::optional<std::vector<std::uint8_t>> labels;
  if (std::filesystem::exists(labels_path)) {
    labels.emplace();
    detail::for_each_line(labels_path, [&](std::string_view line, std::size_t lineno) {
      const auto l = detail::parse_field<int>(line, labels_path.string(), lineno);
      if (l != 0 && l != 1) throw ParseError(labels_path.string(), lineno, "label must be 0 or 1");
      labels->push_back(static_cast<std::uint8_t>(l));
    });
  }

  LoadedGraph out;
  out.graph = AttributedGraph::build(std::move(edges), Matrix(rows, cols, std::move(values)),
                                     std::move(labels), merge_duplicates, &out.stats);
  return out;
}

namespace detail {
inline std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}
}  // namespace detail

inline void save_graph(const AttributedGraph& g, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "edges.csv");
    for (auto [u, v] : g.edges()) out << u << ',' << v << '\n';
  }
  {
    std::ofstream out(dir / "attrs.csv");
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
      auto r = g.attr(static_cast<NodeId>(i));
      for (std::size_t j = 0; j < r.size(); ++j)
        out << (j ? "," : "") << detail::format_double(r[j]);
      out << '\n';
    }
  }
  if (g.has_labels()) {
    std::ofstream out(dir / "labels.csv");
    for (auto l : g.labels()) out << int(l) << '\n';
  }
}

}  // namespace gcad
