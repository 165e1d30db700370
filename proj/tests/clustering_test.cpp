#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "nmod/clustering.hpp"
#include "nmod/generators.hpp"
#include "nmod/rng.hpp"

namespace nmod {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::BadSize;
}

// fraction of vertices whose label matches under the best relabeling
double agreement(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, std::size_t k) {
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::size_t best = 0;
  do {
    std::size_t hit = 0;
    for (std::size_t i = 0; i < a.size(); ++i) hit += perm[a[i]] == b[i];
    best = std::max(best, hit);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(a.size());
}

WeightedGraph random_connected(std::size_t n, std::uint64_t seed) {
  Engine eng(seed);
  Matrix w = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = i + 1; j < w.cols(); ++j)
      if (j == i + 1 || uniform01(eng) < 0.4) w(i, j) = w(j, i) = 0.1 + uniform01(eng);
  return WeightedGraph(std::move(w));
}

std::vector<std::size_t> random_labels(std::size_t n, std::size_t k, Engine& eng) {
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i < k ? i : uniform_index(eng, k);
  return labels;
}

TEST(Representatives, ConstraintsHold) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = random_connected(14, seed);
    const auto dec = decompose(g);
    for (std::size_t k = 1; k <= 5; ++k) {
      const auto reps = representatives(dec, g, k);
      ASSERT_EQ(reps.points.cols(), static_cast<Eigen::Index>(k - 1));
      EXPECT_NEAR(reps.weights.sum(), 1.0, 1e-12);
      const Eigen::Index dim = static_cast<Eigen::Index>(k - 1);
      if (dim == 0) continue;
      const Matrix gram = reps.points.transpose() * reps.weights.asDiagonal() * reps.points;
      EXPECT_LE((gram - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LE((reps.points.transpose() * reps.weights).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Representatives, K3) {
  const auto g = classical::complete(3);
  const auto reps = representatives(decompose(g), g, 2);
  EXPECT_NEAR(reps.weights.dot(reps.points.col(0)), 0.0, 1e-12);
  EXPECT_NEAR(reps.weights.dot(reps.points.col(0).cwiseAbs2()), 1.0, 1e-12);
}

TEST(Representatives, TwoCliquesSeparateBySign) {
  const auto g = classical::two_cliques_bridge(5);
  const auto reps = representatives(decompose(g), g, 2);
  const auto x = reps.points.col(0);
  for (Eigen::Index i = 0; i < 5; ++i) {
    EXPECT_GT(x[i] * x[0], 0.0);
    EXPECT_LT(x[i + 5] * x[0], 0.0);
  }
}

TEST(Representatives, BadK) {
  const auto g = classical::complete(3);
  const auto dec = decompose(g);
  EXPECT_EQ(kind_of([&] { representatives(dec, g, 4); }), ErrorKind::BadK);
  EXPECT_EQ(kind_of([&] { representatives(dec, g, 0); }), ErrorKind::BadK);
}

TEST(KVariance, Examples) {
  const Matrix same = Matrix::Constant(4, 2, 3.0);
  const Vector w4 = Vector::Constant(4, 0.25);
  EXPECT_EQ(k_variance(same, w4, make_partition({0, 1, 0, 1}, 2, w4)), 0.0);

  const Matrix two = (Matrix(2, 1) << -1.0, 1.0).finished();
  const Vector half = Vector::Constant(2, 0.5);
  EXPECT_EQ(k_variance(two, half, make_partition({0, 1}, 2, half)), 0.0);
  EXPECT_NEAR(k_variance(two, half, make_partition({0, 0}, 1, half)), 1.0, 1e-15);
}

TEST(KVariance, InvariantUnderRelabeling) {
  Engine eng(4);
  const auto g = random_connected(12, 2);
  const auto reps = representatives(decompose(g), g, 4);
  const auto labels = random_labels(12, 4, eng);
  std::vector<std::size_t> relabeled(labels.size());
  const std::vector<std::size_t> perm{2, 0, 3, 1};
  for (std::size_t i = 0; i < labels.size(); ++i) relabeled[i] = perm[labels[i]];
  EXPECT_NEAR(k_variance(reps.points, reps.weights, make_partition(labels, 4, reps.weights)),
              k_variance(reps.points, reps.weights, make_partition(relabeled, 4, reps.weights)), 1e-14);
}

TEST(KVariance, ConstantCoordinateDoesNotChangeValue) {
  // appending the trivial coordinate D^{-1/2}u_0 = 1 leaves every within-cluster spread unchanged
  Engine eng(6);
  const auto g = random_connected(12, 3);
  const auto reps = representatives(decompose(g), g, 3);
  Matrix with_one(reps.points.rows(), reps.points.cols() + 1);
  with_one << Vector::Ones(reps.points.rows()), reps.points;
  const auto p = make_partition(random_labels(12, 3, eng), 3, reps.weights);
  EXPECT_NEAR(k_variance(reps.points, reps.weights, p), k_variance(with_one, reps.weights, p), 1e-13);
}

TEST(WeightedKMeans, SeparatedGroups) {
  const Matrix pts = (Matrix(8, 1) << -5.1, -5.0, -4.8, -5.3, 4.0, 4.4, 4.1, 3.9).finished();
  const Vector w = (Vector(8) << 0.1, 0.2, 0.1, 0.1, 0.15, 0.15, 0.1, 0.1).finished();
  const auto res = weighted_kmeans(pts, w, 2, {20, 300, 1});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(res.partition.labels[i], res.partition.labels[0]);
  for (std::size_t i = 4; i < 8; ++i) EXPECT_EQ(res.partition.labels[i], res.partition.labels[4]);
  EXPECT_NE(res.partition.labels[0], res.partition.labels[4]);
  EXPECT_NEAR(res.objective, k_variance(pts, w, res.partition), 1e-15);

  const auto oracle = exhaustive_min_k_variance(pts, w, 2);
  EXPECT_EQ(agreement(oracle.partition.labels, res.partition.labels, 2), 1.0);
  EXPECT_NEAR(oracle.objective, res.objective, 1e-12);
}

TEST(WeightedKMeans, SingleClusterIsTotalVariance) {
  const auto g = random_connected(10, 1);
  const auto reps = representatives(decompose(g), g, 3);
  const auto res = weighted_kmeans(reps, 1);
  const Eigen::RowVectorXd mean = reps.weights.transpose() * reps.points;
  double var = 0.0;
  for (Eigen::Index i = 0; i < 10; ++i) var += reps.weights[i] * (reps.points.row(i) - mean).squaredNorm();
  EXPECT_NEAR(res.objective, var, 1e-12);
  EXPECT_EQ(std::set<std::size_t>(res.partition.labels.begin(), res.partition.labels.end()).size(), 1u);
}

TEST(WeightedKMeans, SingletonsGiveZero) {
  const auto g = random_connected(7, 9);
  const auto reps = representatives(decompose(g), g, 3);
  const auto res = weighted_kmeans(reps.points, reps.weights, 7, {5, 300, 2});
  EXPECT_NEAR(res.objective, 0.0, 1e-20);
}

TEST(WeightedKMeans, NeverBeatsExhaustiveOracle) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const std::size_t n = 6 + seed % 5;
    const auto g = random_connected(n, seed + 100);
    const std::size_t k = 2 + seed % 3;
    const auto reps = representatives(decompose(g), g, k);
    const auto res = weighted_kmeans(reps, k, {20, 300, seed});
    const auto oracle = exhaustive_min_k_variance(reps.points, reps.weights, k);
    EXPECT_LE(oracle.objective, res.objective + 1e-12);
  }
}

TEST(WeightedKMeans, DeterministicForSeed) {
  const auto g = random_connected(30, 5);
  const auto reps = representatives(decompose(g), g, 4);
  const auto a = weighted_kmeans(reps, 4, {10, 300, 77});
  const auto b = weighted_kmeans(reps, 4, {10, 300, 77});
  EXPECT_EQ(a.partition.labels, b.partition.labels);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(ExhaustiveKVariance, TooLarge) {
  EXPECT_EQ(kind_of([] { exhaustive_min_k_variance(Matrix::Zero(13, 1), Vector::Ones(13), 2); }),
            ErrorKind::TooLarge);
}

TEST(NormalizedPartitionVectors, K3) {
  const auto g = normalize_volume(classical::complete(3));
  const Matrix z = normalized_partition_vectors(g, make_partition({0, 1, 1}, 2, g));
  EXPECT_NEAR(z(0, 0), 1.0 / std::sqrt(1.0 / 3.0), 1e-14);
  EXPECT_NEAR(z(1, 1), 1.0 / std::sqrt(2.0 / 3.0), 1e-14);
  EXPECT_NEAR(z(2, 1), 1.0 / std::sqrt(2.0 / 3.0), 1e-14);
  EXPECT_EQ(z(0, 1), 0.0);
  EXPECT_EQ(z(1, 0), 0.0);

  const Matrix one = normalized_partition_vectors(g, make_partition({0, 0, 0}, 1, g));
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(one(i, 0), 1.0, 1e-14);

  EXPECT_EQ(kind_of([&] { normalized_partition_vectors(g, make_partition({0, 0, 0}, 2, g)); }), ErrorKind::ZeroVolume);
}

TEST(SubspaceDistance, TrivialTermVanishes) {
  Engine eng(12);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = normalize_volume(random_connected(15, seed));
    const auto dec = decompose(g);
    const auto p = make_partition(random_labels(15, 3, eng), 3, g);
    const auto terms = subspace_distance_terms(dec, g, p, 3);
    EXPECT_LE(terms[0], 1e-12);
    const double s = subspace_distance_sq(dec, g, p, 3);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 3.0);
  }
}

TEST(SubspaceDistance, NoiselessBlocksAreExact) {
  BlockModel m;
  m.sizes = {4, 6};
  m.probs = (Matrix(2, 2) << 0.9, 0.1, 0.1, 0.7).finished();
  const auto g = normalize_volume(expected_block_graph(m));
  const auto dec = decompose(g);
  const auto p = make_partition(m.block_labels(), 2, g);
  EXPECT_LE(subspace_distance_sq(dec, g, p, 2), 1e-10);
}

TEST(SubspaceDistance, MatchesKVarianceOfRepresentatives) {
  // the k-variance of the optimal representatives equals the summed squared
  // distances of u_1..u_{k-1} from the partition subspace, for every partition
  Engine eng(31);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 10 + seed % 7;
    const std::size_t k = 2 + seed % 4;
    const auto g = normalize_volume(random_connected(n, seed + 40));
    const auto dec = decompose(g);
    const auto reps = representatives(dec, g, k);
    const auto p = make_partition(random_labels(n, k, eng), k, g);
    EXPECT_NEAR(k_variance(reps.points, reps.weights, p), subspace_distance_sq(dec, g, p, k), 1e-10);
  }
}

}  // namespace
}  // namespace nmod
