#include <gtest/gtest.h>

#include "nmod/generators.hpp"
#include "nmod/spectral.hpp"

namespace nmod {
namespace {

double edge_count(const WeightedGraph& g) { return g.weights().sum() / 2.0; }

TEST(GeneralizedRandomGraph, ExtremeProbabilities) {
  BlockModel ones;
  ones.sizes = {3, 4};
  ones.probs = Matrix::Ones(2, 2);
  EXPECT_EQ(generalized_random_graph(ones, 1).graph.weights(), classical::complete(7).weights());
  EXPECT_EQ(generalized_random_graph(ones, 99).graph.weights(), classical::complete(7).weights());

  BlockModel zeros = ones;
  zeros.probs.setZero();
  EXPECT_EQ(edge_count(generalized_random_graph(zeros, 1).graph), 0.0);
}

TEST(GeneralizedRandomGraph, EdgeCountConcentrates) {
  const auto m = BlockModel::planted(2, 75, 0.3, 0.05);
  const auto planted = generalized_random_graph(m, 7);
  const double within = 75.0 * 74.0 / 2.0;
  const double mean = 2 * within * 0.3 + 75.0 * 75.0 * 0.05;
  const double var = 2 * within * 0.3 * 0.7 + 75.0 * 75.0 * 0.05 * 0.95;
  EXPECT_NEAR(edge_count(planted.graph), mean, 4.0 * std::sqrt(var));
  EXPECT_EQ(planted.truth.labels, m.block_labels());
}

TEST(GeneralizedRandomGraph, SameSeedSameGraph) {
  const auto m = BlockModel::planted(3, 20, 0.4, 0.1);
  EXPECT_EQ(generalized_random_graph(m, 5).graph.weights(), generalized_random_graph(m, 5).graph.weights());
  EXPECT_NE(generalized_random_graph(m, 5).graph.weights(), generalized_random_graph(m, 6).graph.weights());
}

TEST(BlockModel, Validation) {
  BlockModel m;
  m.sizes = {2, 2};
  m.probs = (Matrix(2, 2) << 0.5, 0.1, 0.2, 0.5).finished();
  EXPECT_THROW(m.validate(), Error);
  m.probs(1, 0) = 0.1;
  m.probs(0, 0) = 1.5;
  EXPECT_THROW(m.validate(), Error);
  m.probs(0, 0) = 0.5;
  m.sizes = {2, 0};
  EXPECT_THROW(m.validate(), Error);
  try {
    m.validate();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadModel);
  }
}

TEST(ExpectedBlockGraph, SmallTwoBlockSpectrum) {
  BlockModel m;
  m.sizes = {3, 3};
  m.probs = (Matrix(2, 2) << 0.5, 0.2, 0.2, 0.5).finished();
  const auto dec = decompose(expected_block_graph(m));
  // the loop-free diagonal gives four eigenvalues −p_in/d = −0.3125 next to the block eigenvalue 0.25
  for (std::size_t i = 1; i <= 4; ++i) EXPECT_NEAR(dec.mu(i), -0.3125, 1e-12);
  EXPECT_NEAR(dec.mu(5), 0.25, 1e-12);
  EXPECT_NEAR(dec.mu(6), 0.0, 1e-12);
  EXPECT_EQ(structural_count(dec, 0.05), 5u);
  EXPECT_EQ(structural_count(dec, 0.3), 4u);
}

TEST(ExpectedBlockGraph, EqualProbabilitiesAreUnstructured) {
  for (std::size_t n = 12; n <= 16; ++n) {
    BlockModel m;
    m.sizes = {n / 2, n - n / 2};
    m.probs = Matrix::Constant(2, 2, 0.4);
    const auto dec = decompose(expected_block_graph(m));
    EXPECT_NEAR(dec.mu(1), -1.0 / static_cast<double>(n - 1), 1e-12);
    EXPECT_EQ(structural_count(dec, 0.1), 0u) << "n=" << n;
  }
}

TEST(ExpectedBlockGraph, SingleBlockIsComplete) {
  BlockModel m;
  m.sizes = {5};
  m.probs = Matrix::Ones(1, 1);
  EXPECT_EQ(expected_block_graph(m).weights(), classical::complete(5).weights());
}

TEST(Classical, Shapes) {
  EXPECT_EQ(classical::complete(3).weights(), load_edge_list("0\t1\t1\n1\t2\t1\n0\t2\t1").weights());
  EXPECT_NEAR(decompose(classical::complete_bipartite(3, 3)).mu(1), -1.0, 1e-12);
  EXPECT_EQ(edge_count(classical::path(6)), 5.0);
  EXPECT_THROW(classical::path(1), Error);
}

TEST(Classical, TwoCliquesBridge) {
  const auto g = classical::two_cliques_bridge(5);
  EXPECT_EQ(edge_count(g), 21.0);
  const auto dec = decompose(g);
  // one community eigenvalue near 0.93 followed by the within-clique eigenvalue of size about 0.38
  EXPECT_NEAR(dec.mu(1), 0.927, 1e-3);
  EXPECT_NEAR(dec.mu(2), -0.377, 1e-3);
  EXPECT_EQ(structural_count(dec, 0.3), 2u);
  EXPECT_EQ(structural_count(dec, 0.4), 1u);
}

TEST(BlowUp, IdentityAndK2) {
  const auto g = classical::complete(4);
  EXPECT_EQ(blow_up(g, 1).graph.weights(), g.weights());
  EXPECT_EQ(blow_up(g, 1).graph.ids(), g.ids());

  const auto b = blow_up(classical::complete(2), 2);
  EXPECT_EQ(b.graph.weights(), (Matrix(4, 4) << 0, 0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 0, 0).finished());
  EXPECT_EQ(b.group, (std::vector<std::size_t>{0, 0, 1, 1}));
  EXPECT_EQ(b.graph.ids(), (std::vector<std::string>{"0#0", "0#1", "1#0", "1#1"}));
}

TEST(BlowUp, StructuralEigenvaluesPreserved) {
  BlockModel m;
  m.sizes = {3, 4, 5};
  m.probs = (Matrix(3, 3) << 0.8, 0.1, 0.2, 0.1, 0.7, 0.05, 0.2, 0.05, 0.9).finished();
  const auto g = expected_block_graph(m);
  const auto base = decompose(g);
  for (std::size_t t : {2, 3, 4}) {
    const auto dec = decompose(blow_up(g, t).graph);
    for (std::size_t i = 1; i <= 2; ++i) EXPECT_NEAR(dec.mu(i), base.mu(i), 1e-10) << "t=" << t;
  }
}

}  // namespace
}  // namespace nmod
