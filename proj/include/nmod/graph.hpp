#pragma once

// Edge-weighted undirected graphs on a dense weight matrix.

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nmod/error.hpp"

namespace nmod {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A subset of {0..n-1}, stored as a sorted index list without duplicates.
class VertexSet {
 public:
  VertexSet() = default;

  explicit VertexSet(std::vector<std::size_t> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
      throw Error(ErrorKind::BadSize, "vertex set contains duplicates");
  }

  VertexSet(std::initializer_list<std::size_t> members)
      : VertexSet(std::vector<std::size_t>(members)) {}

  static VertexSet all(std::size_t n) {
    VertexSet s;
    s.members_.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.members_[i] = i;
    return s;
  }

  /// Members are base[b] for every set bit b of mask.
  static VertexSet from_mask(std::uint64_t mask, const std::vector<std::size_t>& base) {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < base.size(); ++b)
      if (mask >> b & 1U) out.push_back(base[b]);
    return VertexSet(std::move(out));
  }

  [[nodiscard]] const std::vector<std::size_t>& members() const noexcept { return members_; }
  [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
  [[nodiscard]] bool empty() const noexcept { return members_.empty(); }
  [[nodiscard]] bool contains(std::size_t v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
  }
  [[nodiscard]] auto begin() const noexcept { return members_.begin(); }
  [[nodiscard]] auto end() const noexcept { return members_.end(); }

  /// Complement within {0..n-1}.
  [[nodiscard]] VertexSet complement(std::size_t n) const {
    std::vector<std::size_t> out;
    out.reserve(n - std::min(n, members_.size()));
    for (std::size_t i = 0; i < n; ++i)
      if (!contains(i)) out.push_back(i);
    VertexSet s;
    s.members_ = std::move(out);
    return s;
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<std::size_t> members_;
};

/// Symmetric non-negative weight matrix with zero diagonal, external vertex
/// labels, and cached generalized degrees. Immutable after construction.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(Matrix weights, std::vector<std::string> ids)
      : weights_(std::move(weights)), ids_(std::move(ids)) {
    const auto n = static_cast<std::size_t>(weights_.rows());
    if (weights_.rows() != weights_.cols())
      throw Error(ErrorKind::BadSize, "weight matrix is not square");
    if (ids_.size() != n) throw Error(ErrorKind::BadSize, "label count does not match vertex count");
    for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
      if (weights_(i, i) != 0.0) throw Error(ErrorKind::SelfLoop, "vertex " + ids_[i]);
      for (Eigen::Index j = 0; j < weights_.cols(); ++j) {
        const double w = weights_(i, j);
        if (!std::isfinite(w)) throw Error(ErrorKind::ParseError, "non-finite weight");
        if (w < 0.0) throw Error(ErrorKind::NegativeWeight, ids_[i] + "-" + ids_[j]);
        if (w != weights_(j, i)) throw Error(ErrorKind::BadSize, "weight matrix is not symmetric");
      }
    }
    degrees_ = weights_.rowwise().sum();
    total_volume_ = degrees_.sum();
  }

  /// Labels default to zero-padded indices so lexicographic and numeric order agree.
  explicit WeightedGraph(Matrix weights) : WeightedGraph(weights, index_labels(static_cast<std::size_t>(weights.rows()))) {}

  static std::vector<std::string> index_labels(std::size_t n, std::string_view prefix = "") {
    std::size_t width = 1;
    for (std::size_t x = n > 0 ? n - 1 : 0; x >= 10; x /= 10) ++width;
    std::vector<std::string> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::string digits = std::to_string(i);
      out[i] = std::string(prefix) + std::string(width - digits.size(), '0') + digits;
    }
    return out;
  }

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
  [[nodiscard]] const Matrix& weights() const noexcept { return weights_; }
  [[nodiscard]] double weight(std::size_t i, std::size_t j) const {
    return weights_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  [[nodiscard]] const std::vector<std::string>& ids() const noexcept { return ids_; }
  [[nodiscard]] const Vector& degree_vector() const noexcept { return degrees_; }
  [[nodiscard]] double total_volume() const noexcept { return total_volume_; }

 private:
  Matrix weights_;
  std::vector<std::string> ids_;
  Vector degrees_;
  double total_volume_ = 0.0;
};

namespace detail {

inline std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

[[noreturn]] inline void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace detail

/// Parses "u<TAB>v<TAB>w" lines. Lines starting with '#' and blank lines are
/// skipped. Vertex indices follow the lexicographic order of the labels.
inline WeightedGraph load_edge_list(std::string_view text) {
  struct RawEdge {
    std::string u, v;
    double w;
    std::size_t line;
  };
  std::vector<RawEdge> edges;
  std::set<std::string> labels;
  std::set<std::pair<std::string, std::string>> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    line = detail::trim_cr(line);
    if (line.empty() || line.front() == '#') continue;

    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos)
      detail::parse_fail(line_no, "expected three tab-separated fields");
    std::string u(line.substr(0, t1));
    std::string v(line.substr(t1 + 1, t2 - t1 - 1));
    std::string_view wtext = line.substr(t2 + 1);
    if (u.empty() || v.empty()) detail::parse_fail(line_no, "empty vertex label");

    double w = 0.0;
    const auto [ptr, ec] = std::from_chars(wtext.data(), wtext.data() + wtext.size(), w);
    if (ec != std::errc() || ptr != wtext.data() + wtext.size() || !std::isfinite(w))
      detail::parse_fail(line_no, "malformed weight '" + std::string(wtext) + "'");
    if (u == v) throw Error(ErrorKind::SelfLoop, "line " + std::to_string(line_no) + ": " + u);
    if (w < 0.0) throw Error(ErrorKind::NegativeWeight, "line " + std::to_string(line_no));

    auto key = u < v ? std::make_pair(u, v) : std::make_pair(v, u);
    if (!seen.insert(key).second)
      throw Error(ErrorKind::DuplicateEdge, "line " + std::to_string(line_no) + ": " + u + "-" + v);
    labels.insert(u);
    labels.insert(v);
    edges.push_back({std::move(u), std::move(v), w, line_no});
  }

  std::vector<std::string> ids(labels.begin(), labels.end());
  std::map<std::string, Eigen::Index> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], static_cast<Eigen::Index>(i));

  Matrix w = Matrix::Zero(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(ids.size()));
  for (const auto& e : edges) {
    const auto i = index.at(e.u);
    const auto j = index.at(e.v);
    w(i, j) = e.w;
    w(j, i) = e.w;
  }
  return WeightedGraph(std::move(w), std::move(ids));
}

inline WeightedGraph load_edge_list_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_edge_list(buf.str());
}

/// Shortest decimal text that parses back to the same double.
inline std::string format_real(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

/// TSV serialization; one line per positive-weight pair i < j in index order.
inline std::string to_edge_list(const WeightedGraph& g) {
  std::string out;
  const auto& ids = g.ids();
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      const double w = g.weight(i, j);
      if (w > 0.0) {
        out += ids[i];
        out += '\t';
        out += ids[j];
        out += '\t';
        out += format_real(w);
        out += '\n';
      }
    }
  return out;
}

inline Vector degrees(const WeightedGraph& g) { return g.degree_vector(); }

inline WeightedGraph normalize_volume(const WeightedGraph& g) {
  const double vol = g.total_volume();
  if (!(vol > 0.0)) throw Error(ErrorKind::ZeroVolume, "graph has no positive weight");
  if (vol == 1.0) return g;
  return WeightedGraph(g.weights() / vol, g.ids());
}

inline void check_members(const WeightedGraph& g, const VertexSet& s) {
  if (!s.empty() && s.members().back() >= g.size())
    throw Error(ErrorKind::BadSize, "vertex index out of range");
}

inline double volume(const WeightedGraph& g, const VertexSet& u) {
  check_members(g, u);
  double acc = 0.0;
  for (std::size_t i : u) acc += g.degree_vector()[static_cast<Eigen::Index>(i)];
  return acc;
}

/// Σ_{i∈X} Σ_{j∈Y} w_ij, taken literally when X and Y overlap.
inline double weighted_cut(const WeightedGraph& g, const VertexSet& x, const VertexSet& y) {
  check_members(g, x);
  check_members(g, y);
  double acc = 0.0;
  for (std::size_t i : x)
    for (std::size_t j : y) acc += g.weight(i, j);
  return acc;
}

/// w(A,B) / (Vol(A) Vol(B)).
inline double relative_density(const WeightedGraph& g, const VertexSet& a, const VertexSet& b) {
  const double va = volume(g, a);
  const double vb = volume(g, b);
  if (!(va > 0.0) || !(vb > 0.0)) throw Error(ErrorKind::ZeroVolume, "relative density of a zero-volume set");
  return weighted_cut(g, a, b) / (va * vb);
}

/// Connected components of the support graph, each sorted, ordered by smallest member.
inline std::vector<VertexSet> connected_components(const WeightedGraph& g) {
  const std::size_t n = g.size();
  std::vector<int> comp(n, -1);
  std::vector<VertexSet> out;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    std::vector<std::size_t> members;
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (std::size_t u = 0; u < n; ++u)
        if (comp[u] < 0 && g.weight(v, u) > 0.0) {
          comp[u] = id;
          stack.push_back(u);
        }
    }
    out.emplace_back(std::move(members));
  }
  return out;
}

inline bool is_connected(const WeightedGraph& g) {
  return g.size() > 0 && connected_components(g).size() == 1;
}

/// Maximum-cardinality component; ties go to the component holding the smallest index.
inline VertexSet largest_component(const WeightedGraph& g) {
  auto comps = connected_components(g);
  if (comps.empty()) return {};
  std::size_t best = 0;
  for (std::size_t c = 1; c < comps.size(); ++c)
    if (comps[c].size() > comps[best].size()) best = c;
  return comps[best];
}

inline WeightedGraph induced_subgraph(const WeightedGraph& g, const VertexSet& u) {
  check_members(g, u);
  const auto m = static_cast<Eigen::Index>(u.size());
  Matrix w(m, m);
  std::vector<std::string> ids;
  ids.reserve(u.size());
  for (Eigen::Index a = 0; a < m; ++a) {
    ids.push_back(g.ids()[u.members()[a]]);
    for (Eigen::Index b = 0; b < m; ++b) w(a, b) = g.weight(u.members()[a], u.members()[b]);
  }
  return WeightedGraph(std::move(w), std::move(ids));
}

/// max_i d_i / Vol(V) · n; values far above 1 indicate dominant vertices.
inline double dominance_ratio(const WeightedGraph& g) {
  if (g.size() == 0 || !(g.total_volume() > 0.0)) return 0.0;
  return g.degree_vector().maxCoeff() / g.total_volume() * static_cast<double>(g.size());
}

}  // namespace nmod
