#pragma once

// Continuous Weisfeiler-Lehman embedding of centralized h-subgraphs.
//
// Each iteration replaces a node vector by the average of itself and the mean
// of its neighbours (neighbourhoods taken inside the subgraph). A node's
// embedding concatenates its vectors from iterations 0..k; a subgraph's
// embedding is the mean over its nodes. Nodes without neighbours keep their
// vector unchanged.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "gcad/common.hpp"
#include "gcad/graph.hpp"

namespace gcad {

struct EmbeddingMatrix {
  Matrix values;  // one row per source node, width dim * (iterations + 1)
  std::size_t dim = 0;
  std::size_t iterations = 0;
  std::size_t depth = 0;

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }
  std::span<const double> row(std::size_t i) const noexcept { return values.row(i); }
};

/// Returns X^0..X^k for every node of `sub`; element j is a |V| x d matrix.
inline std::vector<Matrix> wl_iterate(const HSubgraph& sub, std::size_t k) {
  const std::size_t m = sub.size();
  const std::size_t d = sub.cattrs.cols();
  std::vector<std::vector<std::uint32_t>> adj(m);
  for (auto [a, b] : sub.local_edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  std::vector<Matrix> seq;
  seq.reserve(k + 1);
  seq.push_back(sub.cattrs);
  std::vector<double> acc(d);
  for (std::size_t it = 1; it <= k; ++it) {
    const Matrix& prev = seq.back();
    Matrix next(m, d);
    for (std::size_t u = 0; u < m; ++u) {
      auto out = next.row(u);
      auto self = prev.row(u);
      if (adj[u].empty()) {
        std::copy(self.begin(), self.end(), out.begin());
        continue;
      }
      std::fill(acc.begin(), acc.end(), 0.0);
      for (auto w : adj[u]) {
        auto xw = prev.row(w);
        for (std::size_t c = 0; c < d; ++c) acc[c] += xw[c];
      }
      const double inv_deg = 1.0 / static_cast<double>(adj[u].size());
      for (std::size_t c = 0; c < d; ++c) out[c] = 0.5 * (self[c] + acc[c] * inv_deg);
    }
    seq.push_back(std::move(next));
  }
  return seq;
}

/// Concatenation [X^0(u), ..., X^k(u)].
inline std::vector<double> embed_node(std::span<const Matrix> seq, std::size_t u) {
  if (seq.empty()) throw ValidationError("empty WL sequence");
  std::vector<double> out;
  out.reserve(seq.size() * seq.front().cols());
  for (const auto& x : seq) {
    auto r = x.row(u);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

/// Buffers reused across subgraphs by embed_all; embed_subgraph is a thin
/// wrapper that owns a temporary one.
class WlEmbedder {
 public:
  /// Writes the mean node embedding of `sub` into `out` (size d * (k + 1)).
  void embed(const HSubgraph& sub, std::size_t k, std::span<double> out) {
    const std::size_t m = sub.size();
    const std::size_t d = sub.cattrs.cols();

    offsets_.assign(m + 1, 0);
    for (auto [a, b] : sub.local_edges) {
      ++offsets_[a + 1];
      ++offsets_[b + 1];
    }
    for (std::size_t i = 0; i < m; ++i) offsets_[i + 1] += offsets_[i];
    nbrs_.resize(2 * sub.local_edges.size());
    cursor_.assign(offsets_.begin(), offsets_.end() - 1);
    for (auto [a, b] : sub.local_edges) {
      nbrs_[cursor_[a]++] = b;
      nbrs_[cursor_[b]++] = a;
    }

    cur_.assign(sub.cattrs.data().begin(), sub.cattrs.data().end());
    nxt_.resize(cur_.size());
    const double inv_m = 1.0 / static_cast<double>(m);

    for (std::size_t it = 0;; ++it) {
      auto block = out.subspan(it * d, d);
      std::fill(block.begin(), block.end(), 0.0);
      for (std::size_t u = 0; u < m; ++u)
        for (std::size_t c = 0; c < d; ++c) block[c] += cur_[u * d + c];
      for (auto& x : block) x *= inv_m;
      if (it == k) break;

      for (std::size_t u = 0; u < m; ++u) {
        const std::size_t deg = offsets_[u + 1] - offsets_[u];
        double* dst = nxt_.data() + u * d;
        const double* self = cur_.data() + u * d;
        if (deg == 0) {
          std::copy(self, self + d, dst);
          continue;
        }
        std::fill(dst, dst + d, 0.0);
        for (std::size_t e = offsets_[u]; e < offsets_[u + 1]; ++e) {
          const double* xw = cur_.data() + std::size_t(nbrs_[e]) * d;
          for (std::size_t c = 0; c < d; ++c) dst[c] += xw[c];
        }
        const double inv_deg = 1.0 / static_cast<double>(deg);
        for (std::size_t c = 0; c < d; ++c) dst[c] = 0.5 * (self[c] + dst[c] * inv_deg);
      }
      cur_.swap(nxt_);
    }
  }

 private:
  std::vector<std::size_t> offsets_, cursor_;
  std::vector<std::uint32_t> nbrs_;
  std::vector<double> cur_, nxt_;
};

inline std::vector<double> embed_subgraph(const HSubgraph& sub, std::size_t k) {
  std::vector<double> out(sub.cattrs.cols() * (k + 1));
  WlEmbedder().embed(sub, k, out);
  return out;
}

/// Embeds subgraphs produced by sec(g, h); the iteration count equals h.
inline EmbeddingMatrix embed_all(std::span<const HSubgraph> subs, std::size_t h) {
  EmbeddingMatrix e;
  e.depth = h;
  e.iterations = h;
  e.dim = subs.empty() ? 0 : subs.front().cattrs.cols();
  e.values = Matrix(subs.size(), e.dim * (h + 1));
  WlEmbedder embedder;
  for (std::size_t v = 0; v < subs.size(); ++v) {
    for (double x : subs[v].cattrs.data())
      if (!std::isfinite(x))
        throw NumericError("non-finite centralized attribute in subgraph of node " +
                           std::to_string(subs[v].source));
    embedder.embed(subs[v], h, e.values.row(v));
  }
  return e;
}

/// Streaming SEC + embedding: never holds more than one subgraph in memory.
inline EmbeddingMatrix embed_graph(const AttributedGraph& g, std::size_t h,
                                   bool centralize = true) {
  EmbeddingMatrix e;
  e.depth = h;
  e.iterations = h;
  e.dim = g.dim();
  e.values = Matrix(g.num_nodes(), e.dim * (h + 1));
  SubgraphExtractor extractor(g);
  WlEmbedder embedder;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const HSubgraph sub = extractor.extract(v, static_cast<std::uint32_t>(h), centralize);
    for (double x : sub.cattrs.data())
      if (!std::isfinite(x))
        throw NumericError("non-finite centralized attribute in subgraph of node " +
                           std::to_string(v));
    embedder.embed(sub, h, e.values.row(v));
  }
  return e;
}

}  // namespace gcad
