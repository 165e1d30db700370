#pragma once

// Testability harness: degree-proportional random samples η(m, G) and
// finite-scale convergence experiments for the normalized modularity
// spectrum, the structural eigen-subspace (via blow-ups), and the k-variance.

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include "nmod/clustering.hpp"
#include "nmod/generators.hpp"
#include "nmod/rng.hpp"

namespace nmod {

/// m slots drawn with replacement; slot s stands for original vertex slots[s].
struct SampleDraw {
  std::vector<std::size_t> slots;
  WeightedGraph graph;  // simple 0/1 graph on the slots
  std::uint64_t seed = 0;
};

inline void require_probability_weights(const WeightedGraph& g) {
  if (g.size() > 0 && g.weights().maxCoeff() > 1.0)
    throw Error(ErrorKind::WeightsNotProbabilities, "edge weights must lie in [0,1]");
}

/// Slots are i.i.d. with P(slot = i) = d_i / Vol(V); each slot pair (s, t)
/// is then joined with probability w_{slot s, slot t} (never for repeated
/// vertices, since the diagonal is zero). Slots come first in the stream,
/// then one uniform per pair s < t with distinct vertices, row by row.
inline SampleDraw sample_subgraph(const WeightedGraph& g, std::size_t m, std::uint64_t seed) {
  require_probability_weights(g);
  SampleDraw draw;
  draw.seed = seed;
  const auto mm = static_cast<Eigen::Index>(m);
  Matrix w = Matrix::Zero(mm, mm);
  if (m > 0) {
    if (!(g.total_volume() > 0.0)) throw Error(ErrorKind::ZeroVolume, "cannot sample from a graph without edges");
    Engine eng(seed);
    const auto& d = g.degree_vector();
    const DiscreteSampler pick(std::span<const double>(d.data(), static_cast<std::size_t>(d.size())));
    draw.slots.resize(m);
    for (auto& s : draw.slots) s = pick(eng);
    for (std::size_t s = 0; s < m; ++s)
      for (std::size_t t = s + 1; t < m; ++t) {
        if (draw.slots[s] == draw.slots[t]) continue;
        const double p = g.weight(draw.slots[s], draw.slots[t]);
        if (uniform01(eng) < p) {
          w(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = 1.0;
          w(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) = 1.0;
        }
      }
  }
  draw.graph = WeightedGraph(std::move(w), WeightedGraph::index_labels(m, "s"));
  return draw;
}

enum class ConvergenceKind { spectrum, kvariance };

struct ConvergenceRow {
  std::size_t m = 0;
  std::size_t trial = 0;
  std::vector<double> values;     // sampled μ_{m,1..j}, or {S_k²} of the sample
  std::vector<double> reference;  // μ_{n,1..j}, or {S_k²} of the full graph
  std::vector<double> errors;     // |values − reference|; empty when not computable
  double coverage = 0.0;          // share of slots in the analyzed component
  bool flagged = false;           // coverage < 0.9 or nothing to analyze
};

struct ConvergenceSummary {
  std::size_t m = 0;
  std::vector<double> median_errors;
  double median_coverage = 0.0;
};

struct ConvergenceTable {
  ConvergenceKind kind = ConvergenceKind::spectrum;
  std::size_t width = 0;  // j for spectra, 1 for k-variance
  std::vector<ConvergenceRow> rows;
  std::vector<ConvergenceSummary> medians;
  double dominance = 0.0;  // max_i d_i / Vol(V) · n of the full graph
  bool dominance_flag = false;
};

struct ConvergenceOptions {
  std::size_t threads = 1;
  bool bypass_sampling = false;  // diagnostic: analyze g itself instead of a sample
  KMeansConfig kmeans{10, 300, 0};
};

inline constexpr double kCoverageFlag = 0.9;
inline constexpr double kDominanceFlag = 10.0;

namespace detail {

/// Runs body(i) for i in [0, count) on up to `threads` workers.
inline void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

inline void validate_schedule(const std::vector<std::size_t>& schedule, std::size_t n, bool allow_above_n) {
  if (schedule.empty()) throw Error(ErrorKind::BadSize, "empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i > 0 && schedule[i] <= schedule[i - 1]) throw Error(ErrorKind::BadSize, "schedule must be strictly increasing");
    if (!allow_above_n && schedule[i] > n)
      throw Error(ErrorKind::BadSize, "schedule value " + std::to_string(schedule[i]) + " exceeds n=" + std::to_string(n));
  }
}

inline std::vector<double> top_mus(const SpectralDecomposition& dec, std::size_t j) {
  std::vector<double> out(j, 0.0);
  for (std::size_t i = 0; i < j && i < dec.size(); ++i) out[i] = dec.mus[static_cast<Eigen::Index>(i)];
  return out;
}

struct Analyzed {
  WeightedGraph graph;
  double coverage = 0.0;
};

inline Analyzed sample_component(const WeightedGraph& g, std::size_t m, std::uint64_t seed, bool bypass) {
  if (bypass) return {g, 1.0};
  SampleDraw draw = sample_subgraph(g, m, seed);
  const VertexSet comp = largest_component(draw.graph);
  const double coverage = m == 0 ? 0.0 : static_cast<double>(comp.size()) / static_cast<double>(m);
  return {induced_subgraph(draw.graph, comp), coverage};
}

inline std::vector<ConvergenceSummary> summarize(const std::vector<ConvergenceRow>& rows,
                                                 const std::vector<std::size_t>& schedule, std::size_t width) {
  std::vector<ConvergenceSummary> out;
  for (std::size_t m : schedule) {
    ConvergenceSummary s;
    s.m = m;
    std::vector<double> cov;
    std::vector<std::vector<double>> errs(width);
    for (const auto& r : rows) {
      if (r.m != m) continue;
      cov.push_back(r.coverage);
      for (std::size_t i = 0; i < r.errors.size() && i < width; ++i) errs[i].push_back(r.errors[i]);
    }
    s.median_coverage = median(cov);
    for (auto& e : errs) s.median_errors.push_back(median(std::move(e)));
    out.push_back(std::move(s));
  }
  return out;
}

inline void require_experiment_graph(const WeightedGraph& g) {
  require_spectral_preconditions(g);
  require_probability_weights(g);
}

}  // namespace detail

/// Per (m, trial): sample η(m, g), keep the largest component, and compare its
/// top-j |μ|-ordered eigenvalues with those of g. Trial seeds are
/// derive_seed(seed, {m, trial}); rows come out sorted by (m, trial).
inline ConvergenceTable spectral_convergence(const WeightedGraph& g, const std::vector<std::size_t>& schedule,
                                             std::size_t trials, std::size_t j, std::uint64_t seed,
                                             const ConvergenceOptions& opts = {}) {
  detail::require_experiment_graph(g);
  detail::validate_schedule(schedule, g.size(), false);
  if (j < 1 || j + 1 > schedule.front()) throw Error(ErrorKind::BadSize, "need 1 <= j <= min(schedule) - 1");

  const SpectralDecomposition full = decompose(g);
  const auto reference = detail::top_mus(full, j);

  ConvergenceTable table;
  table.kind = ConvergenceKind::spectrum;
  table.width = j;
  table.dominance = dominance_ratio(g);
  table.dominance_flag = table.dominance > kDominanceFlag;
  table.rows.resize(schedule.size() * trials);

  detail::parallel_for(table.rows.size(), opts.threads, [&](std::size_t idx) {
    const std::size_t m = schedule[idx / trials];
    const std::size_t trial = idx % trials;
    ConvergenceRow row;
    row.m = m;
    row.trial = trial;
    row.reference = reference;
    auto [sub, coverage] = detail::sample_component(g, m, derive_seed(seed, {m, trial}), opts.bypass_sampling);
    row.coverage = coverage;
    if (sub.size() >= 2) {
      row.values = detail::top_mus(decompose(sub), j);
      for (std::size_t i = 0; i < j; ++i) row.errors.push_back(std::abs(row.values[i] - reference[i]));
    }
    row.flagged = row.coverage < kCoverageFlag || row.errors.empty();
    table.rows[idx] = std::move(row);
  });
  table.medians = detail::summarize(table.rows, schedule, j);
  return table;
}

/// Per (m, trial): the sample's S_k²(X*) from weighted k-means against the same
/// quantity on g.
inline ConvergenceTable k_variance_convergence(const WeightedGraph& g, const std::vector<std::size_t>& schedule,
                                               std::size_t trials, std::size_t k, std::uint64_t seed,
                                               const ConvergenceOptions& opts = {}) {
  detail::require_experiment_graph(g);
  detail::validate_schedule(schedule, g.size(), false);
  if (k < 1 || k > g.size()) throw Error(ErrorKind::BadK, "k=" + std::to_string(k));

  auto s2 = [&](const WeightedGraph& h, std::uint64_t kseed) {
    const SpectralDecomposition dec = decompose(h);
    const Representatives reps = representatives(dec, h, k);
    KMeansConfig cfg = opts.kmeans;
    cfg.seed = kseed;
    return weighted_kmeans(reps, k, cfg).objective;
  };
  const double reference = s2(g, derive_seed(seed, {0xfeedULL}));

  ConvergenceTable table;
  table.kind = ConvergenceKind::kvariance;
  table.width = 1;
  table.dominance = dominance_ratio(g);
  table.dominance_flag = table.dominance > kDominanceFlag;
  table.rows.resize(schedule.size() * trials);

  detail::parallel_for(table.rows.size(), opts.threads, [&](std::size_t idx) {
    const std::size_t m = schedule[idx / trials];
    const std::size_t trial = idx % trials;
    ConvergenceRow row;
    row.m = m;
    row.trial = trial;
    row.reference = {reference};
    const std::uint64_t trial_seed = derive_seed(seed, {m, trial});
    auto [sub, coverage] = detail::sample_component(g, m, trial_seed, opts.bypass_sampling);
    row.coverage = coverage;
    if (sub.size() >= std::max<std::size_t>(k, 2)) {
      const double v = s2(sub, derive_seed(trial_seed, {1}));
      row.values = {v};
      row.errors = {std::abs(v - reference)};
    }
    row.flagged = row.coverage < kCoverageFlag || row.errors.empty();
    table.rows[idx] = std::move(row);
  });
  table.medians = detail::summarize(table.rows, schedule, 1);
  return table;
}

struct SubspaceRow {
  std::size_t t = 1;
  double distance = 0.0;
};

namespace detail {

// Orthogonal projector onto span(D^{1/2} X) in Euclidean coordinates, i.e. the
// d-weighted orthonormalization of the columns of X.
inline Matrix weighted_projector(const Matrix& x, const Vector& d) {
  Matrix y = d.cwiseSqrt().asDiagonal() * x;
  orthonormalize_columns(y, 0, y.cols());
  return y * y.transpose();
}

}  // namespace detail

/// Distance ‖P_t − P_1‖ between the structural-subspace projector of blow-up
/// factor t (eigenvectors averaged over copy groups) and that of g itself.
/// This finite-scale construction stands in for the operator limit.
inline std::vector<SubspaceRow> subspace_convergence(const WeightedGraph& g, const std::vector<std::size_t>& factors,
                                                     std::size_t k) {
  require_spectral_preconditions(g);
  if (k < 2 || k > g.size()) throw Error(ErrorKind::BadK, "subspace convergence needs 2 <= k <= n");
  if (factors.empty() || factors.front() != 1) throw Error(ErrorKind::BadSize, "factors must start at 1");
  detail::validate_schedule(factors, 0, true);

  const SpectralDecomposition base = decompose(g);
  if (std::abs(base.mu(k - 1)) - std::abs(base.mu(k)) < 1e-8)
    throw Error(ErrorKind::NoGap, "|mu_{k-1}| and |mu_k| are not separated");
  const Vector d = normalize_volume(g).degree_vector();
  const Matrix p1 = detail::weighted_projector(transformed_eigenvectors(base, k - 1), d);

  std::vector<SubspaceRow> out;
  for (std::size_t t : factors) {
    if (t == 1) {
      out.push_back({1, 0.0});
      continue;
    }
    const BlowUp bu = blow_up(g, t);
    const Matrix xb = transformed_eigenvectors(decompose(bu.graph), k - 1);
    Matrix avg = Matrix::Zero(static_cast<Eigen::Index>(g.size()), xb.cols());
    for (std::size_t r = 0; r < bu.group.size(); ++r)
      avg.row(static_cast<Eigen::Index>(bu.group[r])) += xb.row(static_cast<Eigen::Index>(r));
    avg /= static_cast<double>(t);
    const Matrix diff = detail::weighted_projector(avg, d) - p1;
    const auto se = symmetric_eigen((diff + diff.transpose()) / 2.0);
    out.push_back({t, se.values.cwiseAbs().maxCoeff()});
  }
  return out;
}

}  // namespace nmod
