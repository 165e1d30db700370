#pragma once

// Reproducible randomness.
//
// Sequential streams use std::mt19937_64, whose output sequence is fixed by the
// C++ standard. The standard distributions are not portable, so conversions to
// doubles and indices are done here.
//
// Stream-split rule: a derived stream for coordinates (a, b, ...) is seeded
// with derive_seed(seed, a, b, ...), a SplitMix64 fold of the coordinates. The
// edge of vertex pair (i, j), i < j, in an n-vertex generator uses the
// stateless draw counter_uniform(seed, i * n + j).

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace nmod {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) noexcept {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t c : coords) h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

/// Top 53 bits mapped to [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(Engine& eng) { return to_unit(eng()); }

constexpr double counter_uniform(std::uint64_t seed, std::uint64_t index) noexcept {
  return to_unit(mix64(mix64(seed) ^ mix64(index)));
}

/// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x = eng();
  while (x >= limit) x = eng();
  return x % bound;
}

/// Index drawn with probability proportional to non-negative weights.
/// Falls back to the first index when every weight is zero.
inline std::size_t weighted_index(Engine& eng, std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) return 0;
  const double target = uniform01(eng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

/// Cumulative table for repeated draws from one discrete distribution.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const double> weights) : cumulative_(weights.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      cumulative_[i] = acc;
    }
  }

  std::size_t operator()(Engine& eng) const {
    const double target = uniform01(eng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it != cumulative_.end()) return static_cast<std::size_t>(it - cumulative_.begin());
    // target rounded up to the total: take the last entry with positive mass
    std::size_t idx = cumulative_.size() - 1;
    while (idx > 0 && cumulative_[idx] == cumulative_[idx - 1]) --idx;
    return idx;
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace nmod
