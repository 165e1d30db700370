#include <gtest/gtest.h>

#include "nmod/generators.hpp"
#include "nmod/graph.hpp"
#include "nmod/rng.hpp"

namespace nmod {
namespace {

WeightedGraph k3() { return load_edge_list("a\tb\t1\nb\tc\t1\na\tc\t1"); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::BadSize;
}

WeightedGraph random_weighted(std::size_t n, std::uint64_t seed) {
  Engine eng(seed);
  Matrix w = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = i + 1; j < w.cols(); ++j) w(i, j) = w(j, i) = uniform01(eng) < 0.6 ? uniform01(eng) : 0.0;
  return WeightedGraph(std::move(w));
}

TEST(LoadEdgeList, TriangleHasUnitWeights) {
  const auto g = k3();
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g.ids(), (std::vector<std::string>{"a", "b", "c"}));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(g.weight(i, j), i == j ? 0.0 : 1.0);
  EXPECT_DOUBLE_EQ(g.total_volume(), 6.0);
}

TEST(LoadEdgeList, LabelsSortedLexicographically) {
  const auto g = load_edge_list("z\ty\t2\n# comment\n\ny\tm\t0.5\r\n");
  EXPECT_EQ(g.ids(), (std::vector<std::string>{"m", "y", "z"}));
  EXPECT_EQ(g.weight(1, 2), 2.0);
  EXPECT_EQ(g.weight(0, 1), 0.5);
}

TEST(LoadEdgeList, Errors) {
  EXPECT_EQ(kind_of([] { load_edge_list("a\tb\t1\na\tb\t2"); }), ErrorKind::DuplicateEdge);
  EXPECT_EQ(kind_of([] { load_edge_list("a\tb\t1\nb\ta\t2"); }), ErrorKind::DuplicateEdge);
  EXPECT_EQ(kind_of([] { load_edge_list("a\ta\t1"); }), ErrorKind::SelfLoop);
  EXPECT_EQ(kind_of([] { load_edge_list("a\tb\t-1"); }), ErrorKind::NegativeWeight);
  EXPECT_EQ(kind_of([] { load_edge_list("a\tb\tx"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { load_edge_list("a\tb\t1\nb c 1"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { load_edge_list("a\tb\t1\t4"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { load_edge_list("a\tb\tinf"); }), ErrorKind::ParseError);
}

TEST(LoadEdgeList, ParseErrorNamesLine) {
  try {
    load_edge_list("a\tb\t1\n#x\nb\tc\t?");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(LoadEdgeList, SerializationRoundTrip) {
  const auto g = random_weighted(9, 4);
  const auto back = load_edge_list(to_edge_list(g));
  // isolated vertices vanish from an edge list, so compare on a connected instance
  ASSERT_TRUE(is_connected(g));
  EXPECT_EQ(back.ids(), g.ids());
  EXPECT_EQ(back.weights(), g.weights());
}

TEST(Degrees, RowSums) {
  EXPECT_EQ(degrees(k3()), Vector::Constant(3, 2.0));
  EXPECT_EQ(degrees(classical::path(3)), (Vector(3) << 1, 2, 1).finished());
  const Vector d = degrees(normalize_volume(k3()));
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(d[i], 1.0 / 3.0, 1e-15);
}

TEST(NormalizeVolume, K3) {
  const auto g = normalize_volume(k3());
  EXPECT_NEAR(g.weight(0, 1), 1.0 / 6.0, 1e-16);
  EXPECT_NEAR(g.total_volume(), 1.0, 1e-12);
}

TEST(NormalizeVolume, IdempotentAndZeroVolume) {
  const auto once = normalize_volume(random_weighted(12, 1));
  const auto twice = normalize_volume(once);
  EXPECT_LE(((twice.weights() - once.weights()).cwiseAbs().maxCoeff()), 1e-15 * once.weights().maxCoeff());
  EXPECT_EQ(kind_of([] { normalize_volume(WeightedGraph(Matrix::Zero(3, 3))); }), ErrorKind::ZeroVolume);
  EXPECT_EQ(kind_of([] { normalize_volume(WeightedGraph()); }), ErrorKind::ZeroVolume);
}

TEST(Volume, Examples) {
  const auto g = normalize_volume(k3());
  EXPECT_NEAR(volume(g, {0}), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(volume(g, {}), 0.0);
  EXPECT_NEAR(volume(g, VertexSet::all(3)), 1.0, 1e-12);
}

TEST(WeightedCut, Examples) {
  const auto g = normalize_volume(k3());
  EXPECT_NEAR(weighted_cut(g, {0}, {1, 2}), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(weighted_cut(g, {1, 2}, {1, 2}), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(weighted_cut(g, {}, {1, 2}), 0.0);
}

TEST(WeightedCut, AdditiveOverComplementsAndSymmetric) {
  Engine eng(99);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto g = random_weighted(10, t);
    std::vector<std::size_t> xs, ys;
    for (std::size_t i = 0; i < 10; ++i) {
      if (eng() & 1U) xs.push_back(i);
      if (eng() & 1U) ys.push_back(i);
    }
    const VertexSet x(xs), y(ys);
    const auto all = VertexSet::all(10);
    EXPECT_NEAR(weighted_cut(g, x, y) + weighted_cut(g, x, y.complement(10)), weighted_cut(g, x, all), 1e-12);
    EXPECT_NEAR(weighted_cut(g, x, y), weighted_cut(g, y, x), 1e-12);
    EXPECT_NEAR(volume(g, all), g.total_volume(), 1e-12);
  }
}

TEST(RelativeDensity, Examples) {
  const auto g = normalize_volume(k3());
  EXPECT_NEAR(relative_density(g, {0}, {1, 2}), 1.5, 1e-14);
  const auto h = load_edge_list("a\tb\t1\nc\td\t1");
  const auto sub = WeightedGraph((Matrix(3, 3) << 0, 1, 0, 1, 0, 0, 0, 0, 0).finished());
  EXPECT_EQ(kind_of([&] { relative_density(sub, {2}, {0}); }), ErrorKind::ZeroVolume);
  EXPECT_EQ(kind_of([&] { relative_density(h, {}, {0}); }), ErrorKind::ZeroVolume);
}

TEST(RelativeDensity, TwoBlockClosedForm) {
  // uniform cross-weight p between blocks: ρ(V1, V2) = p / (d1 d2) on the normalized graph
  BlockModel m;
  m.sizes = {3, 4};
  m.probs = (Matrix(2, 2) << 0.7, 0.2, 0.2, 0.4).finished();
  const auto g = normalize_volume(expected_block_graph(m));
  const double vol = expected_block_graph(m).total_volume();
  const double p = 0.2 / vol;
  const double d1 = (2 * 0.7 + 4 * 0.2) / vol;
  const double d2 = (3 * 0.2 + 3 * 0.4) / vol;
  EXPECT_NEAR(relative_density(g, {0, 1, 2}, {3, 4, 5, 6}), p / (d1 * d2), 1e-12);
}

TEST(Connectivity, Examples) {
  EXPECT_TRUE(is_connected(k3()));
  EXPECT_TRUE(is_connected(classical::path(5)));
  const auto two = load_edge_list("a\tb\t1\nc\td\t1");
  EXPECT_FALSE(is_connected(two));
  EXPECT_EQ(largest_component(two), (VertexSet{0, 1}));
  const auto uneven = load_edge_list("a\tb\t1\nc\td\t1\nd\te\t1");
  EXPECT_EQ(largest_component(uneven), (VertexSet{2, 3, 4}));
  // zero-weight edges do not connect
  EXPECT_FALSE(is_connected(load_edge_list("a\tb\t0\nb\tc\t1")));
}

TEST(VertexSet, RejectsDuplicatesAndOutOfRange) {
  EXPECT_EQ(kind_of([] { VertexSet({1, 1}); }), ErrorKind::BadSize);
  EXPECT_EQ(kind_of([] { volume(k3(), {5}); }), ErrorKind::BadSize);
}

TEST(WeightedGraph, RejectsInvalidMatrices) {
  EXPECT_EQ(kind_of([] { WeightedGraph((Matrix(2, 2) << 0, 1, 2, 0).finished()); }), ErrorKind::BadSize);
  EXPECT_EQ(kind_of([] { WeightedGraph((Matrix(2, 2) << 1, 1, 1, 0).finished()); }), ErrorKind::SelfLoop);
  EXPECT_EQ(kind_of([] { WeightedGraph((Matrix(2, 2) << 0, -1, -1, 0).finished()); }), ErrorKind::NegativeWeight);
}

TEST(InducedSubgraph, KeepsLabelsAndWeights) {
  const auto g = load_edge_list("a\tb\t1\nb\tc\t2\nc\td\t3");
  const auto s = induced_subgraph(g, {1, 2, 3});
  EXPECT_EQ(s.ids(), (std::vector<std::string>{"b", "c", "d"}));
  EXPECT_EQ(s.weight(0, 1), 2.0);
  EXPECT_EQ(s.weight(1, 2), 3.0);
}

}  // namespace
}  // namespace nmod
