#include <gtest/gtest.h>

#include <sstream>

#include "nmod/generators.hpp"
#include "nmod/report.hpp"

namespace nmod {
namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t field_count(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

TEST(Report, SpectrumBlockRoundTrips) {
  const auto dec = decompose(classical::complete(3));
  const auto block = report::spectrum_block(dec, {0.0, 0.6}, 10);
  EXPECT_EQ(block["mu"].size(), 3u);
  EXPECT_EQ(block["structural_counts"][0]["count"], 2);
  EXPECT_EQ(block["structural_counts"][1]["clusters"], 1);
  const std::string text = block.dump(2);
  EXPECT_EQ(report::Json::parse(text).dump(2), text);
  EXPECT_DOUBLE_EQ(report::Json::parse(text)["mu"][0].get<double>(), dec.mus[0]);
}

TEST(Report, ClusteringBlock) {
  const auto g = classical::two_cliques_bridge(3);
  const auto dec = decompose(g);
  report::ClusteringInfo info;
  info.k = 2;
  info.partition = make_partition({0, 0, 0, 1, 1, 1}, 2, normalize_volume(g));
  info.quality = quality_report(g, dec, info.partition);
  const auto block = report::clustering_block(info, g.ids());
  EXPECT_EQ(block["labels"]["3"], 1);
  EXPECT_EQ(block["cluster_sizes"], report::Json::parse("[3,3]"));
  EXPECT_LE(std::abs(block["duality_residual"].get<double>()), 1e-10);
}

TEST(Report, RegularityBlockMarksSkippedPairs) {
  const auto g = classical::two_cliques_bridge(4);
  const auto dec = decompose(g);
  const auto p = make_partition({0, 0, 0, 0, 1, 1, 1, 1}, 2, g);
  RegularityOptions opts;
  opts.exact_max = 0;
  opts.samples = 0;
  const auto block = report::regularity_block(regularity_certificate(g, dec, p, 2, opts), g.ids());
  ASSERT_EQ(block["pairs"].size(), 3u);
  for (const auto& pr : block["pairs"]) {
    EXPECT_EQ(pr["method"], "skipped");
    EXPECT_TRUE(pr["alpha"].is_null());
  }
}

TEST(Report, CsvQuoting) {
  EXPECT_EQ(report::csv_field("plain"), "plain");
  EXPECT_EQ(report::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(report::csv_field("say \"x\""), "\"say \"\"x\"\"\"");
  EXPECT_EQ(report::csv_real(std::nan("")), "");
}

TEST(Report, ConvergenceCsvShape) {
  const auto g = generalized_random_graph(BlockModel::planted(2, 15, 0.7, 0.1), 3).graph;
  ASSERT_TRUE(is_connected(g));
  const auto table = spectral_convergence(g, {10, 20}, 3, 2, 4);
  const auto lines = lines_of(report::convergence_csv(table));
  ASSERT_EQ(lines.size(), 1u + 6u + 2u);
  EXPECT_EQ(lines[0], "m,trial,coverage,flagged,mu_1,mu_2,ref_1,ref_2,err_1,err_2");
  for (const auto& l : lines) EXPECT_EQ(field_count(l), 10u);
  EXPECT_EQ(lines[7].substr(0, 10), "10,median,");

  const auto kv = k_variance_convergence(g, {20}, 2, 2, 4);
  const auto kv_lines = lines_of(report::convergence_csv(kv));
  EXPECT_EQ(kv_lines[0], "m,trial,coverage,flagged,s2_sample,s2_reference,err");
  EXPECT_EQ(kv_lines.size(), 4u);
}

TEST(Report, SubspaceCsv) {
  const std::vector<SubspaceRow> rows{{1, 0.0}, {2, 0.25}};
  EXPECT_EQ(report::subspace_csv(rows), "t,distance\n1,0\n2,0.25\n");
}

}  // namespace
}  // namespace nmod
