#pragma once

// spec.json round trip for generator specs. Missing keys keep their defaults.

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "gcad/syndata.hpp"

namespace gcad {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(WattsParams, n, degree, rewire_p, high_degree, low_degree)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SbmParams, blocks, block_size, p_in, p_out, dim, mean_sd,
                                                noise_sd, cliques, clique_size)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RggParams, n, anomalies, tau_s, tau_l, anomaly_degree)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LatticeParams, rows, cols, long_edges, injected,
                                                label_wired_neighbors)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CitationParams, topics, topic_size, p_in, p_out, dim,
                                                word_p_topic, word_p_other, cliques, clique_size,
                                                attr_swaps, candidate_k)

/// Only the parameter block of the selected family is written.
inline nlohmann::ordered_json spec_to_json(const SynSpec& s) {
  nlohmann::ordered_json j;
  j["family"] = std::string(to_string(s.family));
  j["seed"] = s.seed;
  nlohmann::json params;
  switch (s.family) {
    case SynFamily::kWatts: params = s.watts; break;
    case SynFamily::kSbmStru: params = s.sbm; break;
    case SynFamily::kRggS:
    case SynFamily::kRggL: params = s.rgg; break;
    case SynFamily::kLatticeL:
    case SynFamily::kLatticeS: params = s.lattice; break;
    case SynFamily::kCitation: params = s.citation; break;
  }
  j["params"] = params;
  return j;
}

inline SynSpec spec_from_json(const nlohmann::json& j) {
  SynSpec s;
  try {
    s.family = parse_syn_family(j.at("family").get<std::string>());
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("params")) {
      const auto& p = j["params"];
      switch (s.family) {
        case SynFamily::kWatts: s.watts = p.get<WattsParams>(); break;
        case SynFamily::kSbmStru: s.sbm = p.get<SbmParams>(); break;
        case SynFamily::kRggS:
        case SynFamily::kRggL: s.rgg = p.get<RggParams>(); break;
        case SynFamily::kLatticeL:
        case SynFamily::kLatticeS: s.lattice = p.get<LatticeParams>(); break;
        case SynFamily::kCitation: s.citation = p.get<CitationParams>(); break;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid spec: ") + e.what());
  }
  return s;
}

/// Generates the graph, writes it to dir together with spec.json.
inline AttributedGraph generate_to_dir(const SynSpec& spec, const std::filesystem::path& dir) {
  auto g = generate(spec);
  save_graph(g, dir);
  std::ofstream out(dir / "spec.json");
  if (!out) throw Error("cannot write " + (dir / "spec.json").string());
  out << spec_to_json(spec).dump(2) << '\n';
  return g;
}

}  // namespace gcad
