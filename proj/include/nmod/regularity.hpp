#pragma once

// Discrepancy machinery: expander-mixing discrepancy, cut norm (exact and
// spectral bound), volume-regularity α of cluster pairs with a certificate
// over a whole partition, and the sin-theta subspace perturbation check.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "nmod/clustering.hpp"
#include "nmod/rng.hpp"

namespace nmod {

enum class Method { exact, sampled, skipped };

constexpr std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::exact: return "exact";
    case Method::sampled: return "sampled";
    case Method::skipped: return "skipped";
  }
  return "unknown";
}

/// Exhaustive enumeration, or `samples` random subset pairs refined by greedy flips.
struct SearchMode {
  bool exhaustive = true;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  static SearchMode exact() { return {}; }
  static SearchMode sampled(std::size_t samples, std::uint64_t seed) { return {false, samples, seed}; }
};

struct Witness {
  VertexSet x;
  VertexSet y;
};

struct DiscrepancySearch {
  double value = 0.0;
  Witness witness;
  Method method = Method::exact;
};

namespace detail {

inline constexpr std::size_t kMaxGreedyFlips = 1000;

// Maximizes score(w(X,Y), Vol X, Vol Y) over X ⊆ rows, Y ⊆ cols of a
// volume-normalized graph. Score returns nullopt for pairs it does not rate.
template <typename Score>
class DiscrepancyMaximizer {
 public:
  DiscrepancyMaximizer(const WeightedGraph& ng, std::vector<std::size_t> rows, std::vector<std::size_t> cols,
                       Score score)
      : rows_(std::move(rows)), cols_(std::move(cols)), score_(std::move(score)) {
    block_.resize(static_cast<Eigen::Index>(rows_.size()), static_cast<Eigen::Index>(cols_.size()));
    for (std::size_t a = 0; a < rows_.size(); ++a)
      for (std::size_t b = 0; b < cols_.size(); ++b)
        block_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = ng.weight(rows_[a], cols_[b]);
    for (std::size_t r : rows_) row_vol_.push_back(ng.degree_vector()[static_cast<Eigen::Index>(r)]);
    for (std::size_t c : cols_) col_vol_.push_back(ng.degree_vector()[static_cast<Eigen::Index>(c)]);
  }

  DiscrepancySearch exhaustive() const {
    const std::size_t nr = rows_.size(), nc = cols_.size();
    if (nr + nc > 24) throw Error(ErrorKind::TooLarge, "exact enumeration needs at most 24 vertices in total");
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t best_x = 0, best_y = 0;
    std::vector<double> colsum(nc);
    for (std::uint64_t xm = 0; xm < (std::uint64_t{1} << nr); ++xm) {
      double vx = 0.0;
      std::fill(colsum.begin(), colsum.end(), 0.0);
      for (std::size_t a = 0; a < nr; ++a) {
        if (!(xm >> a & 1U)) continue;
        vx += row_vol_[a];
        for (std::size_t b = 0; b < nc; ++b) colsum[b] += block_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
      // Gray-code walk over Y
      std::uint64_t ym = 0;
      double w = 0.0, vy = 0.0;
      for (std::uint64_t step = 0;; ++step) {
        if (auto v = score_(w, vx, vy)) {
          if (*v > best || (*v == best && (xm < best_x || (xm == best_x && ym < best_y)))) {
            best = *v;
            best_x = xm;
            best_y = ym;
          }
        }
        if (step + 1 == (std::uint64_t{1} << nc)) break;
        const auto bit = static_cast<std::size_t>(std::countr_zero(step + 1));
        ym ^= std::uint64_t{1} << bit;
        const double sign = (ym >> bit & 1U) ? 1.0 : -1.0;
        w += sign * colsum[bit];
        vy += sign * col_vol_[bit];
        if (ym == 0) {
          w = 0.0;
          vy = 0.0;
        }
      }
    }
    DiscrepancySearch out;
    out.method = Method::exact;
    if (best == -std::numeric_limits<double>::infinity()) return out;
    out.witness = {VertexSet::from_mask(best_x, rows_), VertexSet::from_mask(best_y, cols_)};
    out.value = evaluate(mask_flags(best_x, rows_.size()), mask_flags(best_y, cols_.size())).value_or(0.0);
    return out;
  }

  // Random pairs; every pair that beats the running best of the random draws
  // also seeds a greedy refinement, so the result never decreases with T.
  DiscrepancySearch sampled(std::size_t samples, std::uint64_t seed) const {
    Engine eng(seed);
    const std::size_t nr = rows_.size(), nc = cols_.size();
    double record = -std::numeric_limits<double>::infinity();
    double best = -std::numeric_limits<double>::infinity();
    std::vector<char> best_x(nr, 0), best_y(nc, 0);
    std::vector<char> x(nr), y(nc);
    for (std::size_t t = 0; t < samples; ++t) {
      for (auto& f : x) f = static_cast<char>(eng() >> 63);
      for (auto& f : y) f = static_cast<char>(eng() >> 63);
      const auto v = evaluate(x, y);
      if (!v || !(*v > record)) continue;
      record = *v;
      if (*v > best) {
        best = *v;
        best_x = x;
        best_y = y;
      }
      std::vector<char> gx = x, gy = y;
      const double refined = greedy(gx, gy, *v);
      if (refined > best) {
        best = refined;
        best_x = gx;
        best_y = gy;
      }
    }
    DiscrepancySearch out;
    out.method = Method::sampled;
    if (best == -std::numeric_limits<double>::infinity()) return out;
    out.value = best;
    out.witness = {flags_to_set(best_x, rows_), flags_to_set(best_y, cols_)};
    return out;
  }

  /// Score of an explicit pair, summed in index order.
  std::optional<double> evaluate(const std::vector<char>& x, const std::vector<char>& y) const {
    double w = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
      if (!x[a]) continue;
      vx += row_vol_[a];
      for (std::size_t b = 0; b < y.size(); ++b)
        if (y[b]) w += block_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
    for (std::size_t b = 0; b < y.size(); ++b)
      if (y[b]) vy += col_vol_[b];
    return score_(w, vx, vy);
  }

 private:
  static std::vector<char> mask_flags(std::uint64_t mask, std::size_t n) {
    std::vector<char> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<char>(mask >> i & 1U);
    return f;
  }

  static VertexSet flags_to_set(const std::vector<char>& flags, const std::vector<std::size_t>& base) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < flags.size(); ++i)
      if (flags[i]) out.push_back(base[i]);
    return VertexSet(std::move(out));
  }

  // Single-element flips in index order (rows first) until a full pass brings
  // no improvement or the flip budget runs out.
  double greedy(std::vector<char>& x, std::vector<char>& y, double current) const {
    std::size_t flips = 0;
    bool improved = true;
    while (improved && flips < kMaxGreedyFlips) {
      improved = false;
      for (std::size_t pos = 0; pos < x.size() + y.size() && flips < kMaxGreedyFlips; ++pos) {
        auto& flag = pos < x.size() ? x[pos] : y[pos - x.size()];
        flag = static_cast<char>(!flag);
        const auto v = evaluate(x, y);
        if (v && *v > current) {
          current = *v;
          improved = true;
          ++flips;
        } else {
          flag = static_cast<char>(!flag);
        }
      }
    }
    return current;
  }

  std::vector<std::size_t> rows_, cols_;
  Score score_;
  Matrix block_;
  std::vector<double> row_vol_, col_vol_;
};

template <typename Score>
DiscrepancyMaximizer<Score> make_maximizer(const WeightedGraph& ng, std::vector<std::size_t> rows,
                                           std::vector<std::size_t> cols, Score score) {
  return DiscrepancyMaximizer<Score>(ng, std::move(rows), std::move(cols), std::move(score));
}

}  // namespace detail

/// |w(X,Y) − Vol(X)Vol(Y)| measured on the volume-normalized graph.
inline double mixing_discrepancy(const WeightedGraph& g, const VertexSet& x, const VertexSet& y) {
  const WeightedGraph ng = normalize_volume(g);
  return std::abs(weighted_cut(ng, x, y) - volume(ng, x) * volume(ng, y));
}

/// max over non-empty (X, Y) of |w(X,Y) − Vol X Vol Y| / √(Vol X Vol Y).
/// Never exceeds ‖M_D‖ for a correct implementation.
inline DiscrepancySearch verify_mixing(const WeightedGraph& g, const SearchMode& mode) {
  const WeightedGraph ng = normalize_volume(g);
  const auto all = VertexSet::all(ng.size()).members();
  auto search = detail::make_maximizer(ng, all, all, [](double w, double vx, double vy) -> std::optional<double> {
    if (!(vx > 0.0) || !(vy > 0.0)) return std::nullopt;
    return std::abs(w - vx * vy) / std::sqrt(vx * vy);
  });
  if (mode.exhaustive) {
    if (ng.size() > 12) throw Error(ErrorKind::TooLarge, "exhaustive mixing check needs n <= 12");
    return search.exhaustive();
  }
  return search.sampled(mode.samples, mode.seed);
}

struct CutNormResult {
  double value = 0.0;
  VertexSet rows;
  VertexSet cols;
};

namespace detail {

inline void require_cut_norm_size(const Matrix& a) {
  if (a.rows() + a.cols() > 24) throw Error(ErrorKind::TooLarge, "cut norm enumeration needs m + n <= 24");
}

inline std::vector<std::size_t> iota_vec(Eigen::Index n) {
  return VertexSet::all(static_cast<std::size_t>(n)).members();
}

// Column sums over row subset R, accumulated in ascending row order.
inline std::vector<double> row_subset_sums(const Matrix& a, std::uint64_t rmask) {
  std::vector<double> s(static_cast<std::size_t>(a.cols()), 0.0);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    if (rmask >> i & 1U)
      for (Eigen::Index j = 0; j < a.cols(); ++j) s[static_cast<std::size_t>(j)] += a(i, j);
  return s;
}

inline double masked_sum(const std::vector<double>& s, std::uint64_t cmask) {
  double acc = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j)
    if (cmask >> j & 1U) acc += s[j];
  return acc;
}

}  // namespace detail

/// ‖A‖_□ = max over row subsets R and column subsets C of |Σ_{R×C} a_ij|.
/// For each R the best C is the set of positive (or negative) column sums,
/// which is optimal even under floating-point rounding. Ties resolve to the
/// lexicographically smallest (row mask, column mask).
inline CutNormResult cut_norm_exact(const Matrix& a) {
  detail::require_cut_norm_size(a);
  double best = 0.0;
  std::uint64_t best_r = 0, best_c = 0;
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << a.rows()); ++r) {
    const auto s = detail::row_subset_sums(a, r);
    std::uint64_t pos = 0, neg = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] > 0) pos |= std::uint64_t{1} << j;
      if (s[j] < 0) neg |= std::uint64_t{1} << j;
    }
    const double vp = detail::masked_sum(s, pos);
    const double vn = -detail::masked_sum(s, neg);
    double v = vp;
    std::uint64_t c = pos;
    if (vn > vp || (vn == vp && neg < pos)) {
      v = vn;
      c = neg;
    }
    if (v > best || (v == best && (r < best_r || (r == best_r && c < best_c)))) {
      best = v;
      best_r = r;
      best_c = c;
    }
  }
  return {best, VertexSet::from_mask(best_r, detail::iota_vec(a.rows())),
          VertexSet::from_mask(best_c, detail::iota_vec(a.cols()))};
}

/// max over x ∈ {0,1}^m, y ∈ {0,1}^n of |xᵀ A y|, every vector pair visited.
inline CutNormResult cut_norm_by_vectors(const Matrix& a) {
  detail::require_cut_norm_size(a);
  double best = 0.0;
  std::uint64_t best_r = 0, best_c = 0;
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << a.rows()); ++r) {
    const auto s = detail::row_subset_sums(a, r);
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << a.cols()); ++c) {
      const double v = std::abs(detail::masked_sum(s, c));
      if (v > best) {
        best = v;
        best_r = r;
        best_c = c;
      }
    }
  }
  return {best, VertexSet::from_mask(best_r, detail::iota_vec(a.rows())),
          VertexSet::from_mask(best_c, detail::iota_vec(a.cols()))};
}

/// Largest singular value, from the top eigenvalue of AᵀA.
inline double largest_singular_value(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const Matrix gram = a.transpose() * a;
  const auto se = symmetric_eigen((gram + gram.transpose()) / 2.0);
  return std::sqrt(std::max(0.0, se.values[0]));
}

/// √(mn) · ‖A‖ ≥ ‖A‖_□.
inline double cut_norm_bound(const Matrix& a) {
  return std::sqrt(static_cast<double>(a.rows()) * static_cast<double>(a.cols())) * largest_singular_value(a);
}

struct AlphaResult {
  double alpha = 0.0;
  double rho = 0.0;
  Witness witness;
  Method method = Method::exact;
};

/// Smallest α with |w(X,Y) − ρ Vol X Vol Y| ≤ α·den over the checked X ⊆ A,
/// Y ⊆ B. For disjoint A, B: ρ = w(A,B)/(Vol A Vol B), den = √(Vol A Vol B).
/// For A == B: ρ = w(A,A)/Vol(A)², den = Vol(A).
inline AlphaResult volume_regularity_alpha(const WeightedGraph& g, const VertexSet& a, const VertexSet& b,
                                           const SearchMode& mode) {
  const WeightedGraph ng = normalize_volume(g);
  const bool intra = a == b;
  if (!intra)
    for (std::size_t v : a)
      if (b.contains(v)) throw Error(ErrorKind::BadSize, "cluster pair must be disjoint or identical");
  const double va = volume(ng, a), vb = volume(ng, b);
  if (!(va > 0.0) || !(vb > 0.0)) throw Error(ErrorKind::ZeroVolume, "cluster with zero volume");
  const double rho = weighted_cut(ng, a, b) / (va * vb);
  const double den = intra ? va : std::sqrt(va * vb);

  auto search = detail::make_maximizer(ng, a.members(), b.members(),
                                       [rho, den](double w, double vx, double vy) -> std::optional<double> {
                                         return std::abs(w - rho * vx * vy) / den;
                                       });
  DiscrepancySearch found = mode.exhaustive ? search.exhaustive() : search.sampled(mode.samples, mode.seed);
  return {found.value, rho, std::move(found.witness), found.method};
}

struct PairRegularity {
  std::size_t a = 0, b = 0;
  double rho = 0.0;
  std::optional<double> alpha;  // empty when skipped
  Method method = Method::skipped;
  Witness witness;
  double vol_a = 0.0, vol_b = 0.0;
  double bound_form = 0.0;       // √(2k)·s + ε
  std::optional<double> ratio;   // alpha / bound_form when both are positive-defined
};

struct RegularityReport {
  std::vector<PairRegularity> pairs;
  double s = 0.0;
  double eps = 0.0;
  double bound_form = 0.0;
  double min_cluster_fraction = 0.0;  // K = min_a |V_a| / n
  std::size_t k = 0;
};

struct RegularityOptions {
  std::size_t exact_max = 16;  // exact enumeration when |A| + |B| <= exact_max
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
};

/// α for every cluster pair (a ≤ b) with the quantities entering the bound
/// O(√(2k)·s + ε): s² is the k-variance of the optimal representatives on p,
/// ε = |μ_k|. No constant is asserted; the measured ratio is reported.
inline RegularityReport regularity_certificate(const WeightedGraph& g, const SpectralDecomposition& dec,
                                               const Partition& p, std::size_t k, const RegularityOptions& opts = {}) {
  if (p.k != k || p.labels.size() != g.size()) throw Error(ErrorKind::BadK, "partition does not match k");
  const Representatives reps = representatives(dec, g, k);
  RegularityReport rep;
  rep.k = k;
  rep.s = std::sqrt(std::max(0.0, k_variance(reps.points, reps.weights, p)));
  rep.eps = std::abs(dec.mu(k));
  rep.bound_form = std::sqrt(2.0 * static_cast<double>(k)) * rep.s + rep.eps;

  const WeightedGraph ng = normalize_volume(g);
  const auto clusters = p.clusters();
  std::size_t smallest = g.size();
  for (const auto& c : clusters) smallest = std::min(smallest, c.size());
  rep.min_cluster_fraction = static_cast<double>(smallest) / static_cast<double>(g.size());

  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      PairRegularity pr;
      pr.a = a;
      pr.b = b;
      pr.vol_a = volume(ng, clusters[a]);
      pr.vol_b = volume(ng, clusters[b]);
      pr.bound_form = rep.bound_form;
      const std::size_t span = a == b ? 2 * clusters[a].size() : clusters[a].size() + clusters[b].size();
      SearchMode mode;
      if (span <= std::min<std::size_t>(opts.exact_max, 24)) {
        mode = SearchMode::exact();
      } else if (opts.samples > 0) {
        mode = SearchMode::sampled(opts.samples, derive_seed(opts.seed, {a, b}));
      } else {
        pr.method = Method::skipped;
        if (pr.vol_a > 0.0 && pr.vol_b > 0.0) pr.rho = relative_density(ng, clusters[a], clusters[b]);
        rep.pairs.push_back(std::move(pr));
        continue;
      }
      AlphaResult ar = volume_regularity_alpha(ng, clusters[a], clusters[b], mode);
      pr.rho = ar.rho;
      pr.alpha = ar.alpha;
      pr.method = ar.method;
      pr.witness = std::move(ar.witness);
      if (rep.bound_form > 0.0) pr.ratio = ar.alpha / rep.bound_form;
      rep.pairs.push_back(std::move(pr));
    }
  return rep;
}

struct SinThetaResult {
  double lhs = 0.0;    // ‖P_A P_B‖_F
  double rhs = 0.0;    // ‖P_A (A − B) P_B‖_F / δ
  double delta = 0.0;  // dist(S_1, S_2)
};

/// Both sides of ‖P_A P_B‖_F ≤ (1/δ)‖P_A (A − B) P_B‖_F, where P_A projects onto
/// the eigenvectors of A listed in s1 and P_B onto those of B listed in s2
/// (indices into the descending eigenvalue order).
inline SinThetaResult sin_theta_check(const Matrix& a, const Matrix& b, std::span<const std::size_t> s1,
                                      std::span<const std::size_t> s2) {
  if (a.rows() != b.rows() || a.rows() != a.cols() || b.rows() != b.cols())
    throw Error(ErrorKind::BadSize, "sin-theta check needs square matrices of one size");
  const auto ea = symmetric_eigen(a);
  const auto eb = symmetric_eigen(b);
  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t i : s1)
    for (std::size_t j : s2)
      delta = std::min(delta, std::abs(ea.values[static_cast<Eigen::Index>(i)] - eb.values[static_cast<Eigen::Index>(j)]));
  if (s1.empty() || s2.empty() || !(delta > 0.0))
    throw Error(ErrorKind::NoSeparation, "eigenvalue sets are not separated");

  auto projector = [](const SymmetricEigen& e, std::span<const std::size_t> sel) {
    const Eigen::Index n = e.vectors.rows();
    Matrix p = Matrix::Zero(n, n);
    for (std::size_t i : sel) {
      const auto c = e.vectors.col(static_cast<Eigen::Index>(i));
      p += c * c.transpose();
    }
    return p;
  };
  const Matrix pa = projector(ea, s1);
  const Matrix pb = projector(eb, s2);
  SinThetaResult r;
  r.delta = delta;
  r.lhs = (pa * pb).norm();
  r.rhs = (pa * (a - b) * pb).norm() / delta;
  return r;
}

}  // namespace nmod
