#pragma once

// Test instances: planted-partition random graphs, their noiseless expected
// weight graphs, a few classical graphs, and blow-ups.

#include <string>
#include <vector>

#include "nmod/clustering.hpp"
#include "nmod/rng.hpp"

namespace nmod {

/// Block sizes and a symmetric matrix of edge probabilities between blocks.
struct BlockModel {
  std::vector<std::size_t> sizes;
  Matrix probs;

  [[nodiscard]] std::size_t size() const {
    std::size_t n = 0;
    for (std::size_t s : sizes) n += s;
    return n;
  }

  void validate() const {
    const auto k = static_cast<Eigen::Index>(sizes.size());
    if (k == 0) throw Error(ErrorKind::BadModel, "no blocks");
    if (probs.rows() != k || probs.cols() != k)
      throw Error(ErrorKind::BadModel, "probability matrix must be " + std::to_string(k) + "x" + std::to_string(k));
    for (std::size_t s : sizes)
      if (s == 0) throw Error(ErrorKind::BadModel, "block sizes must be positive");
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) {
        const double p = probs(a, b);
        if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::BadModel, "probabilities must lie in [0,1]");
        if (p != probs(b, a)) throw Error(ErrorKind::BadModel, "probability matrix is not symmetric");
      }
  }

  /// Block index of every vertex, blocks laid out consecutively.
  [[nodiscard]] std::vector<std::size_t> block_labels() const {
    std::vector<std::size_t> labels;
    labels.reserve(size());
    for (std::size_t a = 0; a < sizes.size(); ++a) labels.insert(labels.end(), sizes[a], a);
    return labels;
  }

  /// k blocks of equal size with p_in on the diagonal and p_out elsewhere.
  static BlockModel planted(std::size_t k, std::size_t block_size, double p_in, double p_out) {
    BlockModel m;
    m.sizes.assign(k, block_size);
    const auto kk = static_cast<Eigen::Index>(k);
    m.probs = Matrix::Constant(kk, kk, p_out);
    m.probs.diagonal().setConstant(p_in);
    return m;
  }
};

struct PlantedGraph {
  WeightedGraph graph;
  Partition truth;
};

/// Each pair {i, j} becomes an edge independently with probability
/// p_{block(i), block(j)}, using the draw counter_uniform(seed, i·n + j).
inline PlantedGraph generalized_random_graph(const BlockModel& model, std::uint64_t seed) {
  model.validate();
  const std::size_t n = model.size();
  if (n < 2) throw Error(ErrorKind::BadSize, "need at least two vertices");
  const auto labels = model.block_labels();
  Matrix w = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = model.probs(static_cast<Eigen::Index>(labels[i]), static_cast<Eigen::Index>(labels[j]));
      if (counter_uniform(seed, i * n + j) < p) {
        w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
        w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
      }
    }
  WeightedGraph g(std::move(w));
  Partition truth = make_partition(labels, model.sizes.size(), g);
  return {std::move(g), std::move(truth)};
}

/// w_ij = p_{block(i), block(j)} for i ≠ j; zero diagonal.
inline WeightedGraph expected_block_graph(const BlockModel& model) {
  model.validate();
  const std::size_t n = model.size();
  const auto labels = model.block_labels();
  Matrix w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          i == j ? 0.0 : model.probs(static_cast<Eigen::Index>(labels[i]), static_cast<Eigen::Index>(labels[j]));
  return WeightedGraph(std::move(w));
}

namespace classical {

inline WeightedGraph complete(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::BadSize, "complete graph needs n >= 1");
  const auto nn = static_cast<Eigen::Index>(n);
  Matrix w = Matrix::Ones(nn, nn);
  w.diagonal().setZero();
  return WeightedGraph(std::move(w));
}

inline WeightedGraph complete_bipartite(std::size_t a, std::size_t b) {
  if (a < 1 || b < 1) throw Error(ErrorKind::BadSize, "complete bipartite graph needs both sides >= 1");
  const auto n = static_cast<Eigen::Index>(a + b);
  const auto aa = static_cast<Eigen::Index>(a);
  Matrix w = Matrix::Zero(n, n);
  w.topRightCorner(aa, n - aa).setOnes();
  w.bottomLeftCorner(n - aa, aa).setOnes();
  return WeightedGraph(std::move(w));
}

inline WeightedGraph path(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::BadSize, "path needs n >= 2");
  const auto nn = static_cast<Eigen::Index>(n);
  Matrix w = Matrix::Zero(nn, nn);
  for (Eigen::Index i = 0; i + 1 < nn; ++i) w(i, i + 1) = w(i + 1, i) = 1.0;
  return WeightedGraph(std::move(w));
}

/// Two copies of K_m joined by a single edge between vertices m−1 and m.
inline WeightedGraph two_cliques_bridge(std::size_t m) {
  if (m < 2) throw Error(ErrorKind::BadSize, "two_cliques_bridge needs m >= 2");
  const auto mm = static_cast<Eigen::Index>(m);
  Matrix w = Matrix::Zero(2 * mm, 2 * mm);
  w.topLeftCorner(mm, mm).setOnes();
  w.bottomRightCorner(mm, mm).setOnes();
  w.diagonal().setZero();
  w(mm - 1, mm) = w(mm, mm - 1) = 1.0;
  return WeightedGraph(std::move(w));
}

}  // namespace classical

struct BlowUp {
  WeightedGraph graph;
  std::vector<std::size_t> group;  // original vertex of each copy
};

/// Each vertex becomes t copies; copies of i and j (i ≠ j) carry w_ij, copies
/// of the same vertex are not joined. Copy c of vertex i has index i·t + c.
inline BlowUp blow_up(const WeightedGraph& g, std::size_t t) {
  if (t < 1) throw Error(ErrorKind::BadSize, "blow-up factor must be >= 1");
  if (t == 1) {
    std::vector<std::size_t> group(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) group[i] = i;
    return {g, std::move(group)};
  }
  const std::size_t n = g.size();
  const auto big = static_cast<Eigen::Index>(n * t);
  Matrix w(big, big);
  std::vector<std::size_t> group(n * t);
  std::vector<std::string> ids(n * t);
  const auto copy_labels = WeightedGraph::index_labels(t, "#");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < t; ++c) {
      group[i * t + c] = i;
      ids[i * t + c] = g.ids()[i] + copy_labels[c];
    }
  for (Eigen::Index r = 0; r < big; ++r)
    for (Eigen::Index s = 0; s < big; ++s) w(r, s) = g.weight(group[static_cast<std::size_t>(r)], group[static_cast<std::size_t>(s)]);
  return {WeightedGraph(std::move(w), std::move(ids)), std::move(group)};
}

}  // namespace nmod
