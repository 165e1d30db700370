#pragma once

// Partition quality: normalized Newman–Girvan modularity (density form), the
// normalized cut objective Q_k (trace form), and spectral relaxation bounds.
// The two functionals are computed along independent paths so their duality
// M_k = k − 1 − Q_k can be checked rather than assumed.

#include <tuple>

#include "nmod/clustering.hpp"

namespace nmod {

struct QualityReport {
  double q_k = 0.0;
  double m_k = 0.0;
  double relaxation_upper = 0.0;      // Σ_{i<k} λ_i
  double relaxation_lower_cut = 0.0;  // k − 1 − Σ_{i<k} λ_i
};

/// Σ_a w(V_a, V_a) / Vol(V_a) − w(V,V)/Vol(V); the last term is 1 for any
/// scaling, so unnormalized input gives the same value.
inline double modularity(const WeightedGraph& g, const Partition& p) {
  if (p.labels.size() != g.size()) throw Error(ErrorKind::BadSize, "partition size differs from graph");
  std::vector<double> internal(p.k, 0.0);
  std::vector<double> vol(p.k, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    vol[p.labels[i]] += g.degree_vector()[static_cast<Eigen::Index>(i)];
    for (std::size_t j = 0; j < g.size(); ++j)
      if (p.labels[i] == p.labels[j]) internal[p.labels[i]] += g.weight(i, j);
  }
  double sum = 0.0;
  for (std::size_t a = 0; a < p.k; ++a) {
    if (!(vol[a] > 0.0)) throw Error(ErrorKind::ZeroVolume, "cluster " + std::to_string(a) + " has zero volume");
    sum += internal[a] / vol[a];
  }
  return sum - 1.0;
}

/// tr (D^{1/2} X̃)ᵀ (I − D^{-1/2} W D^{-1/2}) (D^{1/2} X̃) with X̃ the
/// normalized partition vectors.
inline double q_k_value(const WeightedGraph& g, const Partition& p) {
  const Matrix z = normalized_partition_vectors(g, p);
  const Vector sd = g.degree_vector().cwiseSqrt();
  const Vector inv = sd.cwiseInverse();
  const Matrix y = sd.asDiagonal() * z;
  const Matrix n_mat = inv.asDiagonal() * g.weights() * inv.asDiagonal();
  const Eigen::Index nn = n_mat.rows();
  const Matrix lap = Matrix::Identity(nn, nn) - n_mat;
  return (y.transpose() * lap * y).trace();
}

/// (Σ_{i=1}^{k−1} λ_i, k − 1 − Σ_{i=1}^{k−1} λ_i) in the descending-value ordering.
inline std::pair<double, double> relaxation_bounds(const SpectralDecomposition& dec, std::size_t k) {
  if (k < 1 || k > dec.size()) throw Error(ErrorKind::BadK, "k=" + std::to_string(k));
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) sum += dec.lambdas[static_cast<Eigen::Index>(i)];
  return {sum, static_cast<double>(k - 1) - sum};
}

inline QualityReport quality_report(const WeightedGraph& g, const SpectralDecomposition& dec, const Partition& p) {
  QualityReport r;
  r.m_k = modularity(g, p);
  r.q_k = q_k_value(g, p);
  std::tie(r.relaxation_upper, r.relaxation_lower_cut) = relaxation_bounds(dec, p.k);
  return r;
}

}  // namespace nmod
