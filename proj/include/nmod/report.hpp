#pragma once

// Machine-readable reports: JSON for single analyses, CSV for sweeps.

#include <nlohmann/json.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nmod/quality.hpp"
#include "nmod/regularity.hpp"
#include "nmod/sampling.hpp"

namespace nmod::report {

using Json = nlohmann::ordered_json;

struct InputInfo {
  std::string path;
  std::size_t n = 0;
  double volume = 0.0;
  bool connected = false;
  bool largest_component_only = false;
  std::size_t analyzed_n = 0;
  double dominance = 0.0;
};

inline Json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

inline Json reals(const Vector& v, std::size_t limit) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size() && static_cast<std::size_t>(i) < limit; ++i) out.push_back(v[i]);
  return out;
}

inline Json input_block(const InputInfo& in) {
  return Json{{"path", in.path},
              {"n", in.n},
              {"volume", in.volume},
              {"connected", in.connected},
              {"largest_component_only", in.largest_component_only},
              {"analyzed_n", in.analyzed_n},
              {"dominance_ratio", in.dominance},
              {"dominant_vertices", in.dominance > kDominanceFlag}};
}

inline Json spectrum_block(const SpectralDecomposition& dec, const std::vector<double>& eps_list, std::size_t top) {
  Json counts = Json::array();
  for (double eps : eps_list) {
    const std::size_t c = structural_count(dec, eps);
    counts.push_back(Json{{"eps", eps}, {"count", c}, {"clusters", c + 1}});
  }
  return Json{{"lambda", reals(dec.lambdas, top)},
              {"mu", reals(dec.mus, top)},
              {"spectral_norm", spectral_norm(dec)},
              {"spectral_gap", spectral_gap(dec)},
              {"structural_counts", counts}};
}

struct ClusteringInfo {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t restarts = 0;
  Partition partition;
  double s2 = 0.0;
  QualityReport quality;
};

inline Json clustering_block(const ClusteringInfo& c, const std::vector<std::string>& ids) {
  Json labels = Json::object();
  for (std::size_t i = 0; i < c.partition.labels.size(); ++i) labels[ids[i]] = c.partition.labels[i];
  Json sizes = Json::array();
  for (std::size_t a = 0; a < c.partition.k; ++a) sizes.push_back(c.partition.cluster_size(a));
  return Json{{"k", c.k},
              {"seed", c.seed},
              {"restarts", c.restarts},
              {"labels", labels},
              {"cluster_sizes", sizes},
              {"cluster_volumes", c.partition.cluster_volumes},
              {"s2", c.s2},
              {"modularity", c.quality.m_k},
              {"q_k", c.quality.q_k},
              {"duality_residual", c.quality.m_k + c.quality.q_k - static_cast<double>(c.k - 1)},
              {"relaxation_upper", c.quality.relaxation_upper},
              {"relaxation_lower_cut", c.quality.relaxation_lower_cut}};
}

inline Json id_list(const VertexSet& s, const std::vector<std::string>& ids) {
  Json out = Json::array();
  for (std::size_t v : s) out.push_back(ids[v]);
  return out;
}

inline Json regularity_block(const RegularityReport& r, const std::vector<std::string>& ids) {
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    Json witness = nullptr;
    if (p.method != Method::skipped) witness = Json{{"x", id_list(p.witness.x, ids)}, {"y", id_list(p.witness.y, ids)}};
    pairs.push_back(Json{{"a", p.a},
                         {"b", p.b},
                         {"method", std::string(to_string(p.method))},
                         {"rho", p.rho},
                         {"alpha", number_or_null(p.alpha)},
                         {"vol_a", p.vol_a},
                         {"vol_b", p.vol_b},
                         {"bound_form", p.bound_form},
                         {"alpha_over_bound", number_or_null(p.ratio)},
                         {"witness", witness}});
  }
  return Json{{"k", r.k},
              {"s", r.s},
              {"eps", r.eps},
              {"bound_form", r.bound_form},
              {"min_cluster_fraction", r.min_cluster_fraction},
              {"pairs", pairs}};
}

// ---- CSV ----

/// RFC-4180 quoting when the field needs it.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_real(double x) { return std::isfinite(x) ? format_real(x) : std::string(); }

inline void csv_line(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += '\n';
}

inline std::string convergence_csv(const ConvergenceTable& t) {
  std::string out;
  std::vector<std::string> header{"m", "trial", "coverage", "flagged"};
  if (t.kind == ConvergenceKind::spectrum) {
    for (std::size_t i = 1; i <= t.width; ++i) header.push_back("mu_" + std::to_string(i));
    for (std::size_t i = 1; i <= t.width; ++i) header.push_back("ref_" + std::to_string(i));
    for (std::size_t i = 1; i <= t.width; ++i) header.push_back("err_" + std::to_string(i));
  } else {
    header.insert(header.end(), {"s2_sample", "s2_reference", "err"});
  }
  csv_line(out, header);

  auto padded = [&](const std::vector<double>& v) {
    std::vector<std::string> f;
    for (std::size_t i = 0; i < t.width; ++i) f.push_back(i < v.size() ? csv_real(v[i]) : std::string());
    return f;
  };
  for (const auto& r : t.rows) {
    std::vector<std::string> f{std::to_string(r.m), std::to_string(r.trial), csv_real(r.coverage),
                               r.flagged ? "1" : "0"};
    for (auto* part : {&r.values, &r.reference, &r.errors}) {
      auto cells = padded(*part);
      f.insert(f.end(), cells.begin(), cells.end());
    }
    csv_line(out, f);
  }
  const std::vector<double> reference = t.rows.empty() ? std::vector<double>{} : t.rows.front().reference;
  for (const auto& s : t.medians) {
    std::vector<std::string> f{std::to_string(s.m), "median", csv_real(s.median_coverage), ""};
    for (auto* part : {static_cast<const std::vector<double>*>(nullptr), &reference, &s.median_errors}) {
      auto cells = part ? padded(*part) : std::vector<std::string>(t.width);
      f.insert(f.end(), cells.begin(), cells.end());
    }
    csv_line(out, f);
  }
  return out;
}

inline std::string subspace_csv(const std::vector<SubspaceRow>& rows) {
  std::string out;
  csv_line(out, {"t", "distance"});
  for (const auto& r : rows) csv_line(out, {std::to_string(r.t), csv_real(r.distance)});
  return out;
}

}  // namespace nmod::report
