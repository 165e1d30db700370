#pragma once

// Normalized modularity matrix M_D = D^{-1/2} W D^{-1/2} - √d √dᵀ of a
// volume-normalized graph, its spectrum, and the two eigenvalue orderings.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "nmod/eigensolver.hpp"
#include "nmod/graph.hpp"

namespace nmod {

/// Eigenvalues with magnitude at or below this are treated as zero.
inline constexpr double kNumericalZero = 1e-10;

struct SpectralDecomposition {
  Vector lambdas;                        // descending values
  Vector mus;                            // descending magnitude
  std::vector<std::size_t> mu_to_lambda;  // mus[i] == lambdas[mu_to_lambda[i]]
  Matrix eigenvectors;                   // column i pairs with mus[i]
  Vector sqrt_degrees;                   // √d of the normalized graph; empty for a bare matrix

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(lambdas.size()); }
  /// μ_i with the 1-based index used throughout the theory; μ_i = 0 past the end.
  [[nodiscard]] double mu(std::size_t i) const {
    return i >= 1 && i <= size() ? mus[static_cast<Eigen::Index>(i - 1)] : 0.0;
  }
  [[nodiscard]] auto eigenvector(std::size_t i) const { return eigenvectors.col(static_cast<Eigen::Index>(i)); }
};

inline void require_spectral_preconditions(const WeightedGraph& g) {
  if (g.size() == 0) throw Error(ErrorKind::ZeroVolume, "empty graph");
  for (Eigen::Index i = 0; i < g.degree_vector().size(); ++i)
    if (!(g.degree_vector()[i] > 0.0))
      throw Error(ErrorKind::ZeroDegree, "vertex " + g.ids()[static_cast<std::size_t>(i)] + " is isolated");
  if (!is_connected(g)) throw Error(ErrorKind::Disconnected, "graph has more than one component");
}

/// M_D of g after normalizing to unit volume; symmetrized as (M + Mᵀ)/2.
inline Matrix normalized_modularity(const WeightedGraph& g) {
  require_spectral_preconditions(g);
  const WeightedGraph ng = normalize_volume(g);
  const Vector sd = ng.degree_vector().cwiseSqrt();
  const Vector inv = sd.cwiseInverse();
  Matrix m = inv.asDiagonal() * ng.weights() * inv.asDiagonal();
  m -= sd * sd.transpose();
  return (m + m.transpose()) / 2.0;
}

/// Permutation of λ-ranks into the |μ|-descending order. Magnitude ties go to
/// the positive value first, then to the smaller λ-rank; magnitudes at or
/// below kNumericalZero all tie and are ordered by λ-rank alone.
inline std::vector<std::size_t> order_by_abs(std::span<const double> lambdas) {
  std::vector<std::size_t> idx(lambdas.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto magnitude = [&](std::size_t i) {
    const double a = std::abs(lambdas[i]);
    return a <= kNumericalZero ? 0.0 : a;
  };
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double ma = magnitude(a), mb = magnitude(b);
    if (ma != mb) return ma > mb;
    if (ma == 0.0) return a < b;
    const bool pa = lambdas[a] > 0, pb = lambdas[b] > 0;
    if (pa != pb) return pa;
    return a < b;
  });
  return idx;
}

/// Decomposition of an arbitrary symmetric matrix; no √d pinning.
inline SpectralDecomposition eigendecompose(const Matrix& m) {
  SymmetricEigen se = symmetric_eigen(m);
  SpectralDecomposition dec;
  dec.lambdas = se.values;
  dec.mu_to_lambda = order_by_abs(std::span<const double>(se.values.data(), static_cast<std::size_t>(se.values.size())));
  const auto n = se.values.size();
  dec.mus.resize(n);
  dec.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = static_cast<Eigen::Index>(dec.mu_to_lambda[static_cast<std::size_t>(i)]);
    dec.mus[i] = se.values[src];
    dec.eigenvectors.col(i) = se.vectors.col(src);
  }
  return dec;
}

namespace detail {

// Replaces the basis of the numerically-zero eigenspace by √d plus an
// orthonormal complement; √d takes the last λ-slot of that group so it ends
// up last in the |μ| ordering. Eigenvalues of the group are snapped to 0.
inline void pin_trivial_eigenvector(SymmetricEigen& se, const Vector& sd) {
  const Eigen::Index n = se.values.size();
  std::vector<Eigen::Index> zero_cols;
  for (Eigen::Index c = 0; c < n; ++c)
    if (std::abs(se.values[c]) <= kNumericalZero) zero_cols.push_back(c);
  if (zero_cols.empty()) return;

  const auto c = static_cast<Eigen::Index>(zero_cols.size());
  Matrix residual(n, c);
  for (Eigen::Index k = 0; k < c; ++k) {
    Vector v = se.vectors.col(zero_cols[static_cast<std::size_t>(k)]);
    v -= sd.dot(v) * sd;
    v -= sd.dot(v) * sd;
    residual.col(k) = v;
  }
  // pivoted Gram-Schmidt keeps the c-1 best-conditioned directions
  std::vector<bool> used(static_cast<std::size_t>(c), false);
  std::vector<Vector> basis;
  for (Eigen::Index step = 0; step + 1 < c; ++step) {
    Eigen::Index best = -1;
    double best_norm = -1.0;
    for (Eigen::Index k = 0; k < c; ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      const double nk = residual.col(k).norm();
      if (nk > best_norm) {
        best_norm = nk;
        best = k;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    Vector q = residual.col(best) / best_norm;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) q -= b.dot(q) * b;
      q -= sd.dot(q) * sd;
      q.normalize();
    }
    basis.push_back(q);
    for (Eigen::Index k = 0; k < c; ++k)
      if (!used[static_cast<std::size_t>(k)]) residual.col(k) -= q.dot(residual.col(k)) * q;
  }
  for (Eigen::Index k = 0; k + 1 < c; ++k) {
    se.vectors.col(zero_cols[static_cast<std::size_t>(k)]) = basis[static_cast<std::size_t>(k)];
    fix_sign(se.vectors.col(zero_cols[static_cast<std::size_t>(k)]));
  }
  se.vectors.col(zero_cols.back()) = sd;
  for (Eigen::Index c : zero_cols) se.values[c] = 0.0;
}

}  // namespace detail

/// Spectral decomposition of M_D(g). The trivial eigenvector √d is placed last.
inline SpectralDecomposition decompose(const WeightedGraph& g) {
  const Matrix m = normalized_modularity(g);
  const Vector sd = normalize_volume(g).degree_vector().cwiseSqrt();
  SymmetricEigen se = symmetric_eigen(m);
  detail::pin_trivial_eigenvector(se, sd);

  SpectralDecomposition dec;
  dec.lambdas = se.values;
  dec.mu_to_lambda = order_by_abs(std::span<const double>(se.values.data(), static_cast<std::size_t>(se.values.size())));
  const auto n = se.values.size();
  dec.mus.resize(n);
  dec.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = static_cast<Eigen::Index>(dec.mu_to_lambda[static_cast<std::size_t>(i)]);
    dec.mus[i] = se.values[src];
    dec.eigenvectors.col(i) = se.vectors.col(src);
  }
  dec.sqrt_degrees = sd;
  return dec;
}

/// Number of eigenvalues with |μ| > eps; the implied cluster count is one more.
inline std::size_t structural_count(const SpectralDecomposition& dec, double eps) {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < dec.mus.size(); ++i)
    if (std::abs(dec.mus[i]) > eps) ++count;
  return count;
}

/// ‖M_D‖ = |μ_1|.
inline double spectral_norm(const SpectralDecomposition& dec) {
  return dec.mus.size() == 0 ? 0.0 : std::abs(dec.mus[0]);
}

inline double spectral_gap(const SpectralDecomposition& dec) { return 1.0 - spectral_norm(dec); }

/// Columns D^{-1/2} u_i for the first `count` eigenvectors in the |μ| ordering.
inline Matrix transformed_eigenvectors(const SpectralDecomposition& dec, std::size_t count) {
  const Vector inv = dec.sqrt_degrees.cwiseInverse();
  return inv.asDiagonal() * dec.eigenvectors.leftCols(static_cast<Eigen::Index>(count));
}

}  // namespace nmod
