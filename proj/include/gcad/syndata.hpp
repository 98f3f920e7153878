#pragma once

// Synthetic benchmark networks with ground-truth anomaly labels, and
// clique / attribute-swap anomaly injection for unlabeled attributed graphs.
//
// Default parameters target the published dataset statistics; see
// DATASETS.md for the statistic each default was tuned against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "gcad/common.hpp"
#include "gcad/graph.hpp"
#include "gcad/random.hpp"

namespace gcad {

enum class SynFamily { kWatts, kSbmStru, kRggS, kRggL, kLatticeL, kLatticeS, kCitation };

inline std::string_view to_string(SynFamily f) {
  switch (f) {
    case SynFamily::kWatts: return "watts";
    case SynFamily::kSbmStru: return "sbm_stru";
    case SynFamily::kRggS: return "rgg_s";
    case SynFamily::kRggL: return "rgg_l";
    case SynFamily::kLatticeL: return "lattice_l";
    case SynFamily::kLatticeS: return "lattice_s";
    case SynFamily::kCitation: return "citation";
  }
  return "?";
}

inline SynFamily parse_syn_family(std::string_view s) {
  for (auto f : {SynFamily::kWatts, SynFamily::kSbmStru, SynFamily::kRggS, SynFamily::kRggL,
                 SynFamily::kLatticeL, SynFamily::kLatticeS, SynFamily::kCitation})
    if (to_string(f) == s) return f;
  throw ConfigError("unknown dataset family '" + std::string(s) + "'");
}

/// The six benchmark families, in reporting order.
inline constexpr SynFamily kSyntheticSuite[] = {SynFamily::kWatts,  SynFamily::kSbmStru,
                                                SynFamily::kRggS,   SynFamily::kRggL,
                                                SynFamily::kLatticeL, SynFamily::kLatticeS};

struct WattsParams {
  std::size_t n = 500;
  std::size_t degree = 6;
  double rewire_p = 0.1;
  std::size_t high_degree = 8;  // degree >= this is anomalous
  std::size_t low_degree = 4;   // degree <= this is anomalous
};

struct SbmParams {
  std::size_t blocks = 10;
  std::size_t block_size = 100;
  double p_in = 0.115;
  double p_out = 0.0002;
  std::size_t dim = 10;
  double mean_sd = 3.0;   // block means ~ N(0, mean_sd^2) per coordinate
  double noise_sd = 0.3;  // node vectors ~ N(block mean, noise_sd^2)
  std::size_t cliques = 5;
  std::size_t clique_size = 5;
};

struct RggParams {
  std::size_t n = 500;
  std::size_t anomalies = 20;
  double tau_s = 0.077;
  double tau_l = 0.4935;
  std::size_t anomaly_degree = 10;
};

struct LatticeParams {
  std::size_t rows = 30;
  std::size_t cols = 40;
  std::size_t long_edges = 10;       // lattice_l: both endpoints are anomalies
  std::size_t injected = 20;         // lattice_s: nodes placed inside squares
  bool label_wired_neighbors = true; // lattice_s: also label the 4 wired lattice nodes
};

/// Citation-network stand-in: topic blocks with sparse binary word vectors,
/// then clique + attribute-swap injection.
struct CitationParams {
  std::size_t topics = 6;
  std::size_t topic_size = 500;
  double p_in = 0.0045;
  double p_out = 0.00015;
  std::size_t dim = 200;
  double word_p_topic = 0.12;  // word probability for a topic's own vocabulary
  double word_p_other = 0.01;
  std::size_t cliques = 5;
  std::size_t clique_size = 15;
  std::size_t attr_swaps = 75;
  std::size_t candidate_k = 50;
};

struct SynSpec {
  SynFamily family = SynFamily::kSbmStru;
  std::uint64_t seed = 0;
  WattsParams watts;
  SbmParams sbm;
  RggParams rgg;
  LatticeParams lattice;
  CitationParams citation;
};

// ---------------------------------------------------------------------------

inline AttributedGraph gen_watts(const SynSpec& spec) {
  const auto& p = spec.watts;
  if (p.n < 10) throw ConfigError("watts: n must be >= 10");
  if (p.degree % 2 != 0 || p.degree == 0 || p.degree >= p.n)
    throw ConfigError("watts: degree must be even, positive and < n");
  Rng rng(spec.seed);
  const std::size_t n = p.n, half = p.degree / 2;

  std::vector<std::vector<NodeId>> adj(n);
  auto linked = [&](NodeId a, NodeId b) {
    return std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end();
  };
  auto unlink = [&](NodeId a, NodeId b) {
    adj[a].erase(std::find(adj[a].begin(), adj[a].end(), b));
    adj[b].erase(std::find(adj[b].begin(), adj[b].end(), a));
  };
  auto link = [&](NodeId a, NodeId b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t j = 1; j <= half; ++j) link(NodeId(u), NodeId((u + j) % n));

  // Rewire the far endpoint of each ring edge with probability p to a
  // uniformly chosen node that is neither u nor already adjacent to u.
  for (std::size_t j = 1; j <= half; ++j) {
    for (std::size_t u = 0; u < n; ++u) {
      if (!rng.bernoulli(p.rewire_p)) continue;
      const NodeId a = NodeId(u), b = NodeId((u + j) % n);
      if (!linked(a, b)) continue;  // already rewired away from this slot
      if (adj[a].size() >= n - 1) continue;
      NodeId w;
      do {
        w = NodeId(rng.below(n));
      } while (w == a || linked(a, w));
      unlink(a, b);
      link(a, w);
    }
  }

  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (NodeId v : adj[u])
      if (u < v) edges.emplace_back(NodeId(u), v);

  Matrix attrs(n, 2);
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * double(i) / double(n);
    attrs(i, 0) = std::cos(angle);
    attrs(i, 1) = std::sin(angle);
    labels[i] = adj[i].size() >= p.high_degree || adj[i].size() <= p.low_degree;
  }
  return AttributedGraph::build(std::move(edges), std::move(attrs), std::move(labels));
}

inline AttributedGraph gen_sbm_stru(const SynSpec& spec) {
  const auto& p = spec.sbm;
  if (p.blocks < 1 || p.block_size < 1) throw ConfigError("sbm: empty block layout");
  const std::size_t n = p.blocks * p.block_size;
  if (p.cliques * p.clique_size > n) throw ConfigError("sbm: not enough nodes for cliques");
  Rng rng(spec.seed);

  Matrix means(p.blocks, p.dim);
  for (auto& x : means.data()) x = rng.normal(0.0, p.mean_sd);
  Matrix attrs(n, p.dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto mu = means.row(i / p.block_size);
    for (std::size_t c = 0; c < p.dim; ++c) attrs(i, c) = rng.normal(mu[c], p.noise_sd);
  }

  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      const double prob = (u / p.block_size == v / p.block_size) ? p.p_in : p.p_out;
      if (rng.bernoulli(prob)) edges.emplace_back(NodeId(u), NodeId(v));
    }

  std::vector<std::uint8_t> labels(n, 0);
  const auto picked = rng.sample_without_replacement(n, p.cliques * p.clique_size);
  for (std::size_t c = 0; c < p.cliques; ++c) {
    for (std::size_t a = 0; a < p.clique_size; ++a) {
      const auto u = picked[c * p.clique_size + a];
      labels[u] = 1;
      for (std::size_t b = a + 1; b < p.clique_size; ++b)
        edges.emplace_back(NodeId(u), NodeId(picked[c * p.clique_size + b]));
    }
  }
  return AttributedGraph::build(std::move(edges), std::move(attrs), std::move(labels));
}

/// Random geometric graph in the unit square. In the short variant normal
/// nodes link to every normal node closer than tau_s while anomalies link to
/// a random sample of nodes farther than tau_s; the long variant swaps the
/// roles (normal nodes link beyond tau_l, anomalies within it).
inline AttributedGraph gen_rgg(const SynSpec& spec, bool long_variant) {
  const auto& p = spec.rgg;
  if (p.n < 10) throw ConfigError("rgg: n must be >= 10");
  if (p.anomalies >= p.n) throw ConfigError("rgg: too many anomalies");
  Rng rng(spec.seed);
  const std::size_t n = p.n;
  const double tau = long_variant ? p.tau_l : p.tau_s;

  Matrix attrs(n, 2);
  for (auto& x : attrs.data()) x = rng.uniform();
  std::vector<std::uint8_t> labels(n, 0);
  for (auto a : rng.sample_without_replacement(n, p.anomalies)) labels[a] = 1;

  auto normal_rule = [&](double dist) { return long_variant ? dist > tau : dist < tau; };
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (!labels[u] && !labels[v] && normal_rule(euclidean_distance(attrs.row(u), attrs.row(v))))
        edges.emplace_back(NodeId(u), NodeId(v));

  std::vector<std::size_t> candidates;
  for (std::size_t a = 0; a < n; ++a) {
    if (!labels[a]) continue;
    candidates.clear();
    for (std::size_t v = 0; v < n; ++v)
      if (v != a && !normal_rule(euclidean_distance(attrs.row(a), attrs.row(v))))
        candidates.push_back(v);
    const std::size_t k = std::min(p.anomaly_degree, candidates.size());
    for (auto i : rng.sample_without_replacement(candidates.size(), k))
      edges.emplace_back(NodeId(a), NodeId(candidates[i]));
  }
  return AttributedGraph::build(std::move(edges), std::move(attrs), std::move(labels));
}

namespace detail {
inline void lattice_base(const LatticeParams& p, std::vector<Edge>& edges, std::vector<double>& coords) {
  const std::size_t rows = p.rows, cols = p.cols;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const NodeId u = NodeId(r * cols + c);
      coords.push_back(double(c));
      coords.push_back(double(r));
      if (c + 1 < cols) edges.emplace_back(u, u + 1);
      if (r + 1 < rows) edges.emplace_back(u, NodeId(u + cols));
    }
}
}  // namespace detail

/// Square lattice with node vectors at integer grid coordinates.
/// lattice_l adds `long_edges` links between distinct non-adjacent nodes and
/// labels both endpoints. lattice_s places `injected` nodes at random points
/// inside distinct lattice squares, each wired to its four nearest lattice
/// nodes; those nodes (and optionally the wired lattice nodes) are labeled.
inline AttributedGraph gen_lattice(const SynSpec& spec, bool short_variant) {
  const auto& p = spec.lattice;
  if (p.rows < 3 || p.cols < 3) throw ConfigError("lattice: rows and cols must be >= 3");
  const std::size_t base = p.rows * p.cols;
  Rng rng(spec.seed);
  std::vector<Edge> edges;
  std::vector<double> coords;
  detail::lattice_base(p, edges, coords);

  if (!short_variant) {
    if (2 * p.long_edges > base) throw ConfigError("lattice_l: too many long edges");
    std::vector<std::uint8_t> labels(base, 0);
    std::size_t added = 0;
    while (added < p.long_edges) {
      const auto a = NodeId(rng.below(base)), b = NodeId(rng.below(base));
      if (a == b || labels[a] || labels[b]) continue;
      const auto dr = std::abs(double(a / p.cols) - double(b / p.cols));
      const auto dc = std::abs(double(a % p.cols) - double(b % p.cols));
      if (dr + dc <= 1.0) continue;  // already lattice neighbours
      edges.emplace_back(a, b);
      labels[a] = labels[b] = 1;
      ++added;
    }
    return AttributedGraph::build(std::move(edges), Matrix(base, 2, std::move(coords)),
                                  std::move(labels));
  }

  const std::size_t squares = (p.rows - 1) * (p.cols - 1);
  if (p.injected > squares) throw ConfigError("lattice_s: more injected nodes than squares");
  const std::size_t n = base + p.injected;
  std::vector<std::uint8_t> labels(n, 0);
  const auto cells = rng.sample_without_replacement(squares, p.injected);
  std::vector<std::pair<double, NodeId>> nearest;
  for (std::size_t i = 0; i < p.injected; ++i) {
    const double x = double(cells[i] % (p.cols - 1)) + rng.uniform();
    const double y = double(cells[i] / (p.cols - 1)) + rng.uniform();
    const NodeId id = NodeId(base + i);
    coords.push_back(x);
    coords.push_back(y);
    labels[id] = 1;

    nearest.clear();
    for (std::size_t u = 0; u < base; ++u) {
      const double dx = coords[2 * u] - x, dy = coords[2 * u + 1] - y;
      nearest.emplace_back(dx * dx + dy * dy, NodeId(u));
    }
    std::partial_sort(nearest.begin(), nearest.begin() + 4, nearest.end());
    for (std::size_t j = 0; j < 4; ++j) {
      edges.emplace_back(id, nearest[j].second);
      if (p.label_wired_neighbors) labels[nearest[j].second] = 1;
    }
  }
  return AttributedGraph::build(std::move(edges), Matrix(n, 2, std::move(coords)),
                                std::move(labels));
}

struct InjectionParams {
  std::size_t cliques = 5;
  std::size_t clique_size = 15;
  std::size_t attr_swaps = 75;
  std::size_t candidate_k = 50;
};

/// Structural anomalies: `cliques` groups of clique_size random nodes are
/// fully connected. Attribute anomalies: each of attr_swaps further nodes
/// takes the attribute vector of the farthest of candidate_k random nodes.
/// All chosen nodes are distinct and labeled 1.
inline AttributedGraph inject_citation_anomalies(const AttributedGraph& g, const InjectionParams& p,
                                                 std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  if (g.has_labels())
    for (auto l : g.labels())
      if (l) throw ValidationError("inject: graph already carries anomaly labels");
  const std::size_t structural = p.cliques * p.clique_size;
  if (structural + p.attr_swaps > n) throw ConfigError("inject: not enough nodes for anomaly budget");
  if (p.attr_swaps > 0 && (p.candidate_k < 1 || p.candidate_k > n - 1))
    throw ConfigError("inject: candidate_k must be in [1, n-1]");

  Rng rng(seed);
  const auto picked = rng.sample_without_replacement(n, structural + p.attr_swaps);
  std::vector<std::uint8_t> labels(n, 0);
  std::vector<Edge> edges = g.edges();
  for (std::size_t c = 0; c < p.cliques; ++c)
    for (std::size_t a = 0; a < p.clique_size; ++a) {
      const auto u = picked[c * p.clique_size + a];
      labels[u] = 1;
      for (std::size_t b = a + 1; b < p.clique_size; ++b)
        edges.emplace_back(NodeId(u), NodeId(picked[c * p.clique_size + b]));
    }

  Matrix attrs = g.attrs();
  for (std::size_t s = 0; s < p.attr_swaps; ++s) {
    const auto target = picked[structural + s];
    labels[target] = 1;
    std::size_t best = 0;
    double best_d = -1.0;
    // candidates drawn from all nodes other than the target
    for (auto c : rng.sample_without_replacement(n - 1, p.candidate_k)) {
      const std::size_t cand = c >= target ? c + 1 : c;
      const double d = squared_distance(g.attr(NodeId(target)), g.attr(NodeId(cand)));
      if (d > best_d) {
        best_d = d;
        best = cand;
      }
    }
    const auto src = g.attr(NodeId(best));
    std::copy(src.begin(), src.end(), attrs.row(target).begin());
  }
  return AttributedGraph::build(std::move(edges), std::move(attrs), std::move(labels));
}

inline AttributedGraph gen_citation(const SynSpec& spec) {
  const auto& p = spec.citation;
  const std::size_t n = p.topics * p.topic_size;
  Rng rng(spec.seed);
  const std::size_t vocab = p.dim / p.topics;

  Matrix attrs(n, p.dim);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t topic = i / p.topic_size;
    for (std::size_t w = 0; w < p.dim; ++w) {
      const bool own = w / vocab == topic;
      attrs(i, w) = rng.bernoulli(own ? p.word_p_topic : p.word_p_other) ? 1.0 : 0.0;
    }
  }
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(u / p.topic_size == v / p.topic_size ? p.p_in : p.p_out))
        edges.emplace_back(NodeId(u), NodeId(v));
  const auto clean = AttributedGraph::build(std::move(edges), std::move(attrs));
  return inject_citation_anomalies(
      clean, InjectionParams{p.cliques, p.clique_size, p.attr_swaps, p.candidate_k},
      derive_seed(spec.seed, 1));
}

inline AttributedGraph generate(const SynSpec& spec) {
  switch (spec.family) {
    case SynFamily::kWatts: return gen_watts(spec);
    case SynFamily::kSbmStru: return gen_sbm_stru(spec);
    case SynFamily::kRggS: return gen_rgg(spec, false);
    case SynFamily::kRggL: return gen_rgg(spec, true);
    case SynFamily::kLatticeL: return gen_lattice(spec, false);
    case SynFamily::kLatticeS: return gen_lattice(spec, true);
    case SynFamily::kCitation: return gen_citation(spec);
  }
  throw ConfigError("unknown family");
}

}  // namespace gcad
