#pragma once

// Dense symmetric eigensolver: Householder reduction to tridiagonal form
// followed by the implicit QL iteration with Wilkinson-style shifts.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "nmod/error.hpp"

namespace nmod {

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // column i belongs to values[i]
};

namespace detail {

// Row-major scratch storage; the reduction sweeps rows and columns alike.
struct Square {
  std::size_t n;
  std::vector<double> a;
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
};

inline void householder_tridiagonalize(Square& v, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = v.n;
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k < i; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k < i; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  // accumulate the transformations
  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

inline void implicit_ql(Square& v, std::vector<double>& d, std::vector<double>& e, int max_sweeps) {
  const std::size_t n = v.n;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }

    if (m > l) {
      int sweeps = 0;
      do {
        if (++sweeps > max_sweeps)
          throw Error(ErrorKind::EigenFailure, "QL iteration did not converge for eigenvalue " + std::to_string(l));
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          for (std::size_t k = 0; k < n; ++k) {
            h = v(k, ii + 1);
            v(k, ii + 1) = s * v(k, ii) + c * h;
            v(k, ii) = c * v(k, ii) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

/// Flips the sign so the largest-magnitude coordinate is positive; among
/// coordinates within a relative 1e-12 of the maximum the earliest decides.
inline void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  const double top = v.cwiseAbs().maxCoeff();
  if (top == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= top * (1.0 - 1e-12)) {
      if (v[i] < 0) v = -v;
      return;
    }
  }
}

/// Modified Gram-Schmidt (two passes) over columns [first, last) in index order.
inline void orthonormalize_columns(Eigen::MatrixXd& q, Eigen::Index first, Eigen::Index last) {
  for (Eigen::Index c = first; c < last; ++c) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index b = first; b < c; ++b) q.col(c) -= q.col(b).dot(q.col(c)) * q.col(b);
    const double norm = q.col(c).norm();
    if (norm > 0.0) q.col(c) /= norm;
  }
}

}  // namespace detail

/// Full eigendecomposition of a symmetric matrix. Eigenvalues come out
/// descending; eigenvectors are re-orthonormalized within groups of
/// (numerically) equal eigenvalues and carry a deterministic sign.
inline SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m, int max_sweeps = 50) {
  const auto n = static_cast<std::size_t>(m.rows());
  SymmetricEigen out;
  if (n == 0) return out;

  detail::Square v{n, std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      v(i, j) = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  std::vector<double> d(n), e(n);
  detail::householder_tridiagonalize(v, d, e);
  detail::implicit_ql(v, d, e, max_sweeps);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });

  const auto ni = static_cast<Eigen::Index>(n);
  out.values.resize(ni);
  out.vectors.resize(ni, ni);
  for (Eigen::Index c = 0; c < ni; ++c) {
    const std::size_t src = order[static_cast<std::size_t>(c)];
    out.values[c] = d[src];
    for (Eigen::Index r = 0; r < ni; ++r) out.vectors(r, c) = v(static_cast<std::size_t>(r), src);
  }

  const double tol = 1e-10 * std::max(1.0, out.values.cwiseAbs().maxCoeff());
  for (Eigen::Index first = 0; first < ni;) {
    Eigen::Index last = first + 1;
    while (last < ni && out.values[last - 1] - out.values[last] <= tol) ++last;
    if (last - first > 1) detail::orthonormalize_columns(out.vectors, first, last);
    first = last;
  }
  for (Eigen::Index c = 0; c < ni; ++c) detail::fix_sign(out.vectors.col(c));
  return out;
}

}  // namespace nmod
