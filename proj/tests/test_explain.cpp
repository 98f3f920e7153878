#include <gtest/gtest.h>

#include "gcad/explain.hpp"
#include "gcad/scores_io.hpp"
#include "gcad/syndata.hpp"
#include "test_util.hpp"

using namespace gcad;
using gcad::testing::read_file;
using gcad::testing::temp_dir;

namespace {

AttributedGraph rgg_s() {
  SynSpec s;
  s.family = SynFamily::kRggS;
  s.seed = 0;
  return generate(s);
}

}  // namespace

TEST(Explain, TopAndBottomFiles) {
  const auto g = rgg_s();
  const auto r = gcad_run(g, GcadConfig{});
  const auto dir = temp_dir("explain_basic");
  const auto files = export_explanations(g, r, 1, 2, 2, ExplainFormat::kJson, dir);
  ASSERT_EQ(files.size(), 4u);
  EXPECT_EQ(files[0].filename(), "anomalous_1_node" + std::to_string(r.order[0]) + ".json");
  EXPECT_EQ(files[3].filename(), "normal_2_node" + std::to_string(r.order[498]) + ".json");
  for (const auto& f : files) {
    const auto j = nlohmann::json::parse(read_file(f));
    const auto& src = j["subgraph"]["nodes"][0];
    EXPECT_EQ(src["hop"], 0);
    EXPECT_EQ(src["id"], j["node"]);
    for (const auto& c : src["coords"]) EXPECT_EQ(c.get<double>(), 0.0);
    EXPECT_EQ(j["rank"], r.rank[j["node"].get<NodeId>()]);
  }
}

TEST(Explain, AnomaliesHaveLongerEdgesOnRggS) {
  const auto g = rgg_s();
  const auto r = gcad_run(g, GcadConfig{});
  auto mean_edge = [&](const Explanation& e) {
    double s = 0;
    for (std::size_t i = 1; i < e.subgraph.size(); ++i)
      s += std::hypot(e.subgraph.cattrs(i, 0), e.subgraph.cattrs(i, 1));
    return e.subgraph.size() > 1 ? s / double(e.subgraph.size() - 1) : 0.0;
  };
  const auto items = select_explanations(g, r, 1, 2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 2; b < 4; ++b) EXPECT_GT(mean_edge(items[a]), mean_edge(items[b]));
}

TEST(Explain, OnlyNormal) {
  const auto g = rgg_s();
  const auto r = gcad_run(g, GcadConfig{});
  const auto files = export_explanations(g, r, 1, 0, 3, ExplainFormat::kDot, temp_dir("explain_normal"));
  ASSERT_EQ(files.size(), 3u);
  for (const auto& f : files) EXPECT_EQ(f.filename().string().rfind("normal_", 0), 0u);
}

TEST(Explain, TooManyRequested) {
  const auto g = gcad::testing::path_graph({0, 1, 2});
  const auto r = make_ranking({0.1, 0.2, 0.3});
  EXPECT_THROW(select_explanations(g, r, 1, 2, 2), ConfigError);
  EXPECT_NO_THROW(select_explanations(g, r, 1, 2, 1));
}

TEST(Explain, DotPositionsOnlyInTwoDimensions) {
  const auto g2 = rgg_s();
  const auto r2 = make_ranking(std::vector<double>(g2.num_nodes(), 0.0));
  const auto dot2 = to_dot(select_explanations(g2, r2, 1, 1, 0)[0]);
  EXPECT_NE(dot2.find("pos=\"0,0!\""), std::string::npos);
  EXPECT_NE(dot2.find("fillcolor=red"), std::string::npos);

  const auto g3 = gcad::testing::random_graph(10, 0.3, 3, 1);
  const auto r3 = make_ranking(std::vector<double>(10, 0.0));
  const auto dot3 = to_dot(select_explanations(g3, r3, 1, 1, 0)[0]);
  EXPECT_EQ(dot3.find("pos="), std::string::npos);
}

TEST(ExplainProperty, ByteIdenticalOnRerun) {
  const auto g = rgg_s();
  for (auto fmt : {ExplainFormat::kJson, ExplainFormat::kDot}) {
    const auto a = export_explanations(g, gcad_run(g, GcadConfig{}), 1, 2, 2, fmt, temp_dir("explain_a"));
    const auto b = export_explanations(g, gcad_run(g, GcadConfig{}), 1, 2, 2, fmt, temp_dir("explain_b"));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].filename(), b[i].filename());
      EXPECT_EQ(read_file(a[i]), read_file(b[i]));
    }
  }
}

TEST(ExplainProperty, SubgraphSerializationIndependentOfDetector) {
  const auto g = rgg_s();
  GcadConfig lof;
  lof.detector.kind = DetectorKind::kLof;
  const auto ri = gcad_run(g, GcadConfig{}), rl = gcad_run(g, lof);
  const auto ei = select_explanations(g, ri, 1, 10, 10), el = select_explanations(g, rl, 1, 10, 10);
  for (const auto& a : ei)
    for (const auto& b : el) {
      if (a.node != b.node) continue;
      EXPECT_EQ(subgraph_json(a.subgraph).dump(), subgraph_json(b.subgraph).dump());
    }
  // Any node's subgraph block is the same whatever ranking selected it.
  const auto fixed = extract_h_subgraph(g, 17, 1);
  EXPECT_EQ(subgraph_json(fixed).dump(), subgraph_json(extract_h_subgraph(g, 17, 1)).dump());
}

TEST(ScoresIo, RoundTrip) {
  const auto g = gcad::testing::random_graph(30, 0.1, 2, 4);
  const auto r = gcad_run(g, GcadConfig{});
  const auto dir = temp_dir("scores_io");
  write_scores_csv(r, dir / "scores.csv");
  const auto back = read_scores_csv(dir / "scores.csv");
  EXPECT_EQ(back.scores, r.scores);
  EXPECT_EQ(back.order, r.order);
  gcad::testing::write_file(dir / "bad.csv", "node,score,rank\n0,0.5,2\n1,0.4,1\n");
  EXPECT_THROW(read_scores_csv(dir / "bad.csv"), ValidationError);
  gcad::testing::write_file(dir / "bad2.csv", "node,score\n");
  EXPECT_THROW(read_scores_csv(dir / "bad2.csv"), ParseError);
}
