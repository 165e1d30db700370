#pragma once

// Vertex representatives from structural eigenvectors, the degree-weighted
// k-variance, weighted k-means, and the subspace distance between structural
// eigenvectors and piecewise-constant partition vectors.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "nmod/rng.hpp"
#include "nmod/spectral.hpp"

namespace nmod {

/// Rows r_i of X* = (D^{-1/2}u_1, ..., D^{-1/2}u_{k-1}) with vertex weights d_i.
struct Representatives {
  Matrix points;  // n × (k-1)
  Vector weights;
  std::size_t k = 0;
};

struct Partition {
  std::vector<std::size_t> labels;
  std::size_t k = 0;
  std::vector<double> cluster_volumes;

  [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }

  [[nodiscard]] std::vector<VertexSet> clusters() const {
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
    std::vector<VertexSet> out;
    out.reserve(k);
    for (auto& m : members) out.emplace_back(std::move(m));
    return out;
  }

  [[nodiscard]] std::size_t cluster_size(std::size_t a) const {
    std::size_t c = 0;
    for (std::size_t l : labels) c += (l == a);
    return c;
  }
};

/// Builds a partition and its per-cluster volumes Σ weights.
inline Partition make_partition(std::vector<std::size_t> labels, std::size_t k, const Vector& weights) {
  Partition p;
  p.k = k;
  p.cluster_volumes.assign(k, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= k) throw Error(ErrorKind::BadK, "label " + std::to_string(labels[i]) + " >= k");
    p.cluster_volumes[labels[i]] += weights[static_cast<Eigen::Index>(i)];
  }
  p.labels = std::move(labels);
  return p;
}

inline Partition make_partition(std::vector<std::size_t> labels, std::size_t k, const WeightedGraph& g) {
  return make_partition(std::move(labels), k, g.degree_vector());
}

inline Representatives representatives(const SpectralDecomposition& dec, const WeightedGraph& g, std::size_t k) {
  if (k < 1 || k > g.size()) throw Error(ErrorKind::BadK, "k=" + std::to_string(k) + " with n=" + std::to_string(g.size()));
  if (dec.size() != g.size() || dec.sqrt_degrees.size() != static_cast<Eigen::Index>(g.size()))
    throw Error(ErrorKind::BadSize, "decomposition does not belong to this graph");
  Representatives reps;
  reps.k = k;
  reps.points = transformed_eigenvectors(dec, k - 1);
  reps.weights = dec.sqrt_degrees.cwiseAbs2();
  return reps;
}

/// Weighted centers c_a = Σ_{j∈V_a} d_j r_j / Vol(V_a); rows of the result.
inline Matrix weighted_centers(const Matrix& points, const Vector& weights, const std::vector<std::size_t>& labels,
                               std::size_t k) {
  Matrix centers = Matrix::Zero(static_cast<Eigen::Index>(k), points.cols());
  std::vector<double> mass(k, 0.0);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    centers.row(static_cast<Eigen::Index>(labels[i])) += weights[ii] * points.row(ii);
    mass[labels[i]] += weights[ii];
    ++count[labels[i]];
  }
  for (std::size_t a = 0; a < k; ++a) {
    const auto aa = static_cast<Eigen::Index>(a);
    if (mass[a] > 0.0) {
      centers.row(aa) /= mass[a];
    } else if (count[a] > 0) {
      // zero-mass cluster: unweighted mean keeps the center finite
      centers.row(aa).setZero();
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == a) centers.row(aa) += points.row(static_cast<Eigen::Index>(i));
      centers.row(aa) /= static_cast<double>(count[a]);
    }
  }
  return centers;
}

/// S_k²(X, P) = Σ_a Σ_{j∈V_a} d_j ‖r_j − c_a‖². Empty clusters contribute 0.
inline double k_variance(const Matrix& points, const Vector& weights, const Partition& p) {
  if (p.labels.size() != static_cast<std::size_t>(points.rows()))
    throw Error(ErrorKind::BadSize, "partition and point count differ");
  const Matrix centers = weighted_centers(points, weights, p.labels, p.k);
  double total = 0.0;
  for (std::size_t i = 0; i < p.labels.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    total += weights[ii] * (points.row(ii) - centers.row(static_cast<Eigen::Index>(p.labels[i]))).squaredNorm();
  }
  return total;
}

struct KMeansConfig {
  std::size_t restarts = 20;
  std::size_t max_iter = 300;
  std::uint64_t seed = 0;
};

struct ClusteringResult {
  Partition partition;
  double objective = 0.0;
};

namespace detail {

inline std::vector<std::size_t> assign_nearest(const Matrix& points, const Matrix& centers) {
  std::vector<std::size_t> labels(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < centers.rows(); ++a) {
      const double dist = (points.row(i) - centers.row(a)).squaredNorm();
      if (dist < best_d) {
        best_d = dist;
        best = static_cast<std::size_t>(a);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
  }
  return labels;
}

// Each empty cluster takes the point with the largest weighted distance to its
// current center, drawn from clusters that keep at least one member.
inline void repair_empty(const Matrix& points, const Vector& weights, const Matrix& centers,
                         std::vector<std::size_t>& labels, std::size_t k) {
  std::vector<std::size_t> count(k, 0);
  for (std::size_t l : labels) ++count[l];
  for (std::size_t a = 0; a < k; ++a) {
    if (count[a] > 0) continue;
    std::size_t pick = labels.size();
    double worst = -1.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (count[labels[i]] < 2) continue;
      const auto ii = static_cast<Eigen::Index>(i);
      const double contrib =
          weights[ii] * (points.row(ii) - centers.row(static_cast<Eigen::Index>(labels[i]))).squaredNorm();
      if (contrib > worst) {
        worst = contrib;
        pick = i;
      }
    }
    if (pick == labels.size()) return;  // fewer points than clusters
    --count[labels[pick]];
    labels[pick] = a;
    ++count[a];
  }
}

// Greedy D²-seeding with probabilities ∝ d_i · (distance to nearest center)².
inline Matrix seed_centers(const Matrix& points, const Vector& weights, std::size_t k, Engine& eng) {
  const auto n = static_cast<std::size_t>(points.rows());
  Matrix centers(static_cast<Eigen::Index>(k), points.cols());
  std::vector<bool> chosen(n, false);
  std::vector<double> w(weights.data(), weights.data() + weights.size());
  std::size_t first = weighted_index(eng, w);
  chosen[first] = true;
  centers.row(0) = points.row(static_cast<Eigen::Index>(first));

  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < k; ++c) {
    std::vector<double> score(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      nearest[i] = std::min(nearest[i], (points.row(ii) - centers.row(static_cast<Eigen::Index>(c - 1))).squaredNorm());
      score[i] = weights[ii] * nearest[i];
      total += score[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      pick = weighted_index(eng, score);
    } else {
      while (pick < n && chosen[pick]) ++pick;
      if (pick == n) pick = 0;
    }
    chosen[pick] = true;
    centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(pick));
  }
  return centers;
}

inline ClusteringResult lloyd(const Matrix& points, const Vector& weights, std::size_t k, std::size_t max_iter,
                              Engine& eng) {
  Matrix centers = seed_centers(points, weights, k, eng);
  std::vector<std::size_t> labels;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    std::vector<std::size_t> next = assign_nearest(points, centers);
    repair_empty(points, weights, centers, next, k);
    const bool stable = next == labels;
    labels = std::move(next);
    Matrix updated = weighted_centers(points, weights, labels, k);
    const double shift = (updated - centers).rowwise().norm().maxCoeff();
    centers = std::move(updated);
    if (stable || shift < 1e-10) break;
  }
  Partition p = make_partition(labels, k, weights);
  const double obj = k_variance(points, weights, p);
  return {std::move(p), obj};
}

}  // namespace detail

/// Best of `restarts` seeded Lloyd runs minimizing S_k²(X, P). Restart r uses
/// the stream derive_seed(seed, {r}); ties go to the earlier restart.
inline ClusteringResult weighted_kmeans(const Matrix& points, const Vector& weights, std::size_t k,
                                        const KMeansConfig& config = {}) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k < 1 || k > n) throw Error(ErrorKind::BadK, "k=" + std::to_string(k) + " with n=" + std::to_string(n));
  if (k == 1) {
    Partition p = make_partition(std::vector<std::size_t>(n, 0), 1, weights);
    const double obj = k_variance(points, weights, p);
    return {std::move(p), obj};
  }
  ClusteringResult best;
  best.objective = std::numeric_limits<double>::infinity();
  const std::size_t runs = std::max<std::size_t>(1, config.restarts);
  for (std::size_t r = 0; r < runs; ++r) {
    Engine eng(derive_seed(config.seed, {r}));
    ClusteringResult res = detail::lloyd(points, weights, k, std::max<std::size_t>(1, config.max_iter), eng);
    if (res.objective < best.objective) best = std::move(res);
  }
  return best;
}

inline ClusteringResult weighted_kmeans(const Representatives& reps, std::size_t k, const KMeansConfig& config = {}) {
  return weighted_kmeans(reps.points, reps.weights, k, config);
}

/// Global minimum of S_k²(X, P) over partitions into at most k blocks,
/// enumerated as restricted growth strings. First minimum in enumeration order wins.
inline ClusteringResult exhaustive_min_k_variance(const Matrix& points, const Vector& weights, std::size_t k) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (n > 12) throw Error(ErrorKind::TooLarge, "exhaustive k-variance needs n <= 12, got " + std::to_string(n));
  if (k < 1) throw Error(ErrorKind::BadK, "k=0");
  ClusteringResult best;
  best.objective = std::numeric_limits<double>::infinity();
  if (n == 0) {
    best.partition = make_partition({}, k, weights);
    best.objective = 0.0;
    return best;
  }

  std::vector<std::size_t> labels(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);  // max label among labels[0..i]
  for (;;) {
    Partition p = make_partition(labels, k, weights);
    const double v = k_variance(points, weights, p);
    if (v < best.objective) {
      best.objective = v;
      best.partition = std::move(p);
    }
    // next restricted growth string with labels < k
    std::size_t i = n;
    while (i-- > 1) {
      const std::size_t cap = std::min(k - 1, prefix_max[i - 1] + 1);
      if (labels[i] < cap) break;
    }
    if (i == 0 || i >= n) break;
    ++labels[i];
    prefix_max[i] = std::max(prefix_max[i - 1], labels[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      labels[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return best;
}

/// Columns z_a with 1/√Vol(V_a) on V_a and 0 elsewhere.
inline Matrix normalized_partition_vectors(const WeightedGraph& g, const Partition& p) {
  if (p.labels.size() != g.size()) throw Error(ErrorKind::BadSize, "partition size differs from graph");
  std::vector<double> vol(p.k, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) vol[p.labels[i]] += g.degree_vector()[static_cast<Eigen::Index>(i)];
  for (std::size_t a = 0; a < p.k; ++a)
    if (!(vol[a] > 0.0)) throw Error(ErrorKind::ZeroVolume, "cluster " + std::to_string(a) + " has zero volume");
  Matrix z = Matrix::Zero(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(p.k));
  for (std::size_t i = 0; i < g.size(); ++i)
    z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p.labels[i])) = 1.0 / std::sqrt(vol[p.labels[i]]);
  return z;
}

/// dist²(u_i, F) for i = 0..k-1, where u_0 = √d, u_1.. follow the |μ| ordering,
/// and F = span{D^{1/2} z_a}.
inline std::vector<double> subspace_distance_terms(const SpectralDecomposition& dec, const WeightedGraph& g,
                                                   const Partition& p, std::size_t k) {
  if (k < 1 || k > g.size()) throw Error(ErrorKind::BadK, "k=" + std::to_string(k));
  const Matrix z = normalized_partition_vectors(g, p);
  const Matrix f = g.degree_vector().cwiseSqrt().asDiagonal() * z;  // orthonormal columns
  std::vector<double> terms;
  terms.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Vector u = i == 0 ? dec.sqrt_degrees : Vector(dec.eigenvector(i - 1));
    const Vector r = u - f * (f.transpose() * u);
    terms.push_back(r.squaredNorm());
  }
  return terms;
}

inline double subspace_distance_sq(const SpectralDecomposition& dec, const WeightedGraph& g, const Partition& p,
                                   std::size_t k) {
  double s = 0.0;
  for (double t : subspace_distance_terms(dec, g, p, k)) s += t;
  return s;
}

}  // namespace nmod
