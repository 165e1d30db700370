// nmod: normalized-modularity spectral clustering, regularity certificates,
// instance generation and sampling experiments from the command line.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nmod/nmod.hpp"
#include "nmod/report.hpp"

namespace {

using nmod::Error;
using nmod::ErrorKind;
using nmod::report::Json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Loaded {
  nmod::WeightedGraph original;
  nmod::WeightedGraph graph;  // what gets analyzed
  nmod::report::InputInfo info;
};

Loaded load(const std::string& path, bool largest_component) {
  Loaded out;
  out.original = nmod::load_edge_list_file(path);
  out.info.path = path;
  out.info.n = out.original.size();
  out.info.volume = out.original.total_volume();
  out.info.connected = nmod::is_connected(out.original);
  out.info.largest_component_only = largest_component;
  out.graph = largest_component && !out.info.connected
                  ? nmod::induced_subgraph(out.original, nmod::largest_component(out.original))
                  : out.original;
  out.info.analyzed_n = out.graph.size();
  out.info.dominance = nmod::dominance_ratio(out.graph);
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::BadSize, "cannot write " + path);
  out << text;
}

void emit_json(const Json& doc) { std::cout << doc.dump(2) << '\n'; }

// "a,b,c" -> list; empty items rejected.
template <typename T>
std::vector<T> parse_list(const std::string& text, char sep, const std::string& what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw Error(ErrorKind::BadModel, "empty entry in " + what);
    item = item.substr(first, last - first + 1);
    std::size_t used = 0;
    T value{};
    try {
      if constexpr (std::is_same_v<T, double>) {
        value = std::stod(item, &used);
      } else {
        if (item.front() == '-') throw std::invalid_argument(item);
        value = static_cast<T>(std::stoull(item, &used));
      }
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadModel, "malformed " + what + " entry '" + item + "'");
    }
    if (used != item.size()) throw Error(ErrorKind::BadModel, "malformed " + what + " entry '" + item + "'");
    out.push_back(value);
  }
  if (out.empty()) throw Error(ErrorKind::BadModel, "empty " + what);
  return out;
}

/// Rows separated by ';', entries by ','.
nmod::Matrix parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_list<double>(row, ',', "probability matrix"));
  if (rows.empty()) throw Error(ErrorKind::BadModel, "empty probability matrix");
  const auto k = static_cast<Eigen::Index>(rows.size());
  nmod::Matrix m(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(a)].size()) != k)
      throw Error(ErrorKind::BadModel, "probability matrix must be square");
    for (Eigen::Index b = 0; b < k; ++b) m(a, b) = rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  return m;
}

struct ClusterRun {
  nmod::SpectralDecomposition dec;
  nmod::report::ClusteringInfo info;
};

ClusterRun run_clustering(const nmod::WeightedGraph& g, std::size_t k, std::uint64_t seed, std::size_t restarts) {
  ClusterRun run;
  run.dec = nmod::decompose(g);
  if (k < 1 || k > g.size())
    throw Error(ErrorKind::BadK, "k=" + std::to_string(k) + " must lie in [1, " + std::to_string(g.size()) + "]");
  const auto reps = nmod::representatives(run.dec, g, k);
  auto result = nmod::weighted_kmeans(reps, k, {restarts, 300, seed});
  run.info.k = k;
  run.info.seed = seed;
  run.info.restarts = restarts;
  run.info.s2 = result.objective;
  run.info.partition = std::move(result.partition);
  run.info.quality = nmod::quality_report(g, run.dec, run.info.partition);
  const double residual = run.info.quality.m_k + run.info.quality.q_k - static_cast<double>(k - 1);
  if (std::abs(residual) > 1e-10)
    throw std::logic_error("modularity/cut duality violated: residual " + nmod::format_real(residual));
  return run;
}

struct Options {
  std::string file;
  std::vector<double> eps;
  std::size_t top = 0;
  bool largest_component = false;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t restarts = 20;
  std::size_t exact_max = 16;
  std::size_t samples = 2000;

  std::string kind;
  std::string sizes;
  std::string probs;
  std::string name;
  std::size_t n = 0, a = 0, b = 0, m = 0;
  std::string output;

  std::string schedule;
  std::size_t trials = 10;
  std::size_t j = 0;
  std::string mode = "spectrum";
  std::size_t threads = 1;
};

int cmd_spectrum(const Options& o) {
  const Loaded in = load(o.file, o.largest_component);
  const auto dec = nmod::decompose(in.graph);
  const std::size_t top = o.top == 0 ? dec.size() : o.top;
  emit_json(Json{{"input", nmod::report::input_block(in.info)},
                 {"spectrum", nmod::report::spectrum_block(dec, o.eps, top)}});
  return kExitOk;
}

int cmd_cluster(const Options& o) {
  const Loaded in = load(o.file, o.largest_component);
  const ClusterRun run = run_clustering(in.graph, o.k, o.seed, o.restarts);
  emit_json(Json{{"input", nmod::report::input_block(in.info)},
                 {"spectrum", nmod::report::spectrum_block(run.dec, o.eps, run.dec.size())},
                 {"clustering", nmod::report::clustering_block(run.info, in.graph.ids())}});
  return kExitOk;
}

int cmd_regularity(const Options& o) {
  const Loaded in = load(o.file, o.largest_component);
  const ClusterRun run = run_clustering(in.graph, o.k, o.seed, o.restarts);
  const auto cert = nmod::regularity_certificate(in.graph, run.dec, run.info.partition, o.k,
                                                 {o.exact_max, o.samples, o.seed});
  emit_json(Json{{"input", nmod::report::input_block(in.info)},
                 {"spectrum", nmod::report::spectrum_block(run.dec, o.eps, run.dec.size())},
                 {"clustering", nmod::report::clustering_block(run.info, in.graph.ids())},
                 {"regularity", nmod::report::regularity_block(cert, in.graph.ids())}});
  return kExitOk;
}

int cmd_generate(const Options& o, bool seed_given) {
  nmod::WeightedGraph g;
  if (o.kind == "block" || o.kind == "expected") {
    nmod::BlockModel model;
    model.sizes = parse_list<std::size_t>(o.sizes, ',', "block sizes");
    model.probs = parse_matrix(o.probs);
    if (o.kind == "block") {
      if (!seed_given) throw CLI::RequiredError("--seed");
      g = nmod::generalized_random_graph(model, o.seed).graph;
    } else {
      g = nmod::expected_block_graph(model);
    }
  } else if (o.kind == "classical") {
    if (o.name == "complete") g = nmod::classical::complete(o.n);
    else if (o.name == "complete_bipartite") g = nmod::classical::complete_bipartite(o.a, o.b);
    else if (o.name == "path") g = nmod::classical::path(o.n);
    else if (o.name == "two_cliques_bridge") g = nmod::classical::two_cliques_bridge(o.m);
    else throw Error(ErrorKind::BadSize, "unknown classical graph '" + o.name + "'");
  } else {
    throw Error(ErrorKind::BadModel, "unknown generator kind '" + o.kind + "'");
  }
  const std::string text = nmod::to_edge_list(g);
  write_output(o.output, text);
  std::size_t edges = 0;
  for (char c : text) edges += (c == '\n');
  std::cerr << "n=" << g.size() << " edges=" << edges << '\n';
  return kExitOk;
}

int cmd_converge(const Options& o) {
  const Loaded in = load(o.file, o.largest_component);
  const auto schedule = parse_list<std::size_t>(o.schedule, ',', "schedule");
  nmod::ConvergenceOptions opts;
  opts.threads = o.threads;
  std::string csv;
  if (o.mode == "spectrum") {
    if (o.j == 0) throw CLI::RequiredError("--j");
    csv = nmod::report::convergence_csv(nmod::spectral_convergence(in.graph, schedule, o.trials, o.j, o.seed, opts));
  } else if (o.mode == "kvariance") {
    if (o.k == 0) throw CLI::RequiredError("--k");
    csv = nmod::report::convergence_csv(nmod::k_variance_convergence(in.graph, schedule, o.trials, o.k, o.seed, opts));
  } else if (o.mode == "blowup") {
    if (o.k == 0) throw CLI::RequiredError("--k");
    csv = nmod::report::subspace_csv(nmod::subspace_convergence(in.graph, schedule, o.k));
  } else {
    throw CLI::ValidationError("--mode", "expected spectrum, kvariance or blowup");
  }
  write_output(o.output, csv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normalized modularity spectral clustering and volume-regularity toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* spectrum = app.add_subcommand("spectrum", "Normalized modularity spectrum of a TSV edge list");
  spectrum->add_option("file", o.file, "TSV edge list")->required();
  spectrum->add_option("--eps", o.eps, "report structural counts at these thresholds")->delimiter(',');
  spectrum->add_option("--top", o.top, "only list the first J eigenvalues of each ordering");
  spectrum->add_flag("--largest-component", o.largest_component, "analyze the largest connected component");

  auto* cluster = app.add_subcommand("cluster", "Spectral clustering with weighted k-means");
  cluster->add_option("file", o.file, "TSV edge list")->required();
  cluster->add_option("--k", o.k, "cluster count")->required();
  cluster->add_option("--seed", o.seed, "k-means seed")->required();
  cluster->add_option("--restarts", o.restarts, "k-means restarts");
  cluster->add_option("--eps", o.eps, "report structural counts at these thresholds")->delimiter(',');
  cluster->add_flag("--largest-component", o.largest_component, "analyze the largest connected component");

  auto* regularity = app.add_subcommand("regularity", "Clustering plus volume-regularity certificate");
  regularity->add_option("file", o.file, "TSV edge list")->required();
  regularity->add_option("--k", o.k, "cluster count")->required();
  regularity->add_option("--seed", o.seed, "seed for k-means and sampled discrepancy")->required();
  regularity->add_option("--restarts", o.restarts, "k-means restarts");
  regularity->add_option("--exact-max", o.exact_max, "enumerate pairs exactly when |A|+|B| <= N (N <= 24)");
  regularity->add_option("--samples", o.samples, "random subset pairs for larger clusters (0 skips them)");
  regularity->add_option("--eps", o.eps, "report structural counts at these thresholds")->delimiter(',');
  regularity->add_flag("--largest-component", o.largest_component, "analyze the largest connected component");

  auto* generate = app.add_subcommand("generate", "Write a generated graph as a TSV edge list");
  bool seed_given = false;
  generate->add_option("kind", o.kind, "block | expected | classical")->required();
  generate->add_option("--sizes", o.sizes, "block sizes, comma separated");
  generate->add_option("--p", o.probs, "probability matrix, rows separated by ';'");
  auto* gen_seed = generate->add_option("--seed", o.seed, "seed for random block graphs");
  generate->add_option("--name", o.name, "complete | complete_bipartite | path | two_cliques_bridge");
  generate->add_option("--n", o.n, "vertex count (complete, path)");
  generate->add_option("--a", o.a, "first side (complete_bipartite)");
  generate->add_option("--b", o.b, "second side (complete_bipartite)");
  generate->add_option("--m", o.m, "clique size (two_cliques_bridge)");
  generate->add_option("-o,--output", o.output, "output path (stdout when omitted)");

  auto* converge = app.add_subcommand("converge", "Sampling and blow-up convergence experiments as CSV");
  converge->add_option("file", o.file, "TSV edge list with weights in [0,1]")->required();
  converge->add_option("--schedule", o.schedule, "sample sizes m, or blow-up factors t in blowup mode")->required();
  converge->add_option("--trials", o.trials, "trials per schedule entry");
  converge->add_option("--j", o.j, "number of leading eigenvalues (spectrum mode)");
  converge->add_option("--k", o.k, "cluster count (kvariance and blowup modes)");
  converge->add_option("--mode", o.mode, "spectrum | kvariance | blowup");
  converge->add_option("--seed", o.seed, "experiment seed")->required();
  converge->add_option("--threads", o.threads, "worker threads");
  converge->add_option("-o,--output", o.output, "CSV path (stdout when omitted)");
  converge->add_flag("--largest-component", o.largest_component, "analyze the largest connected component");

  try {
    app.parse(argc, argv);
    seed_given = gen_seed->count() > 0;
    if (*spectrum) return cmd_spectrum(o);
    if (*cluster) return cmd_cluster(o);
    if (*regularity) return cmd_regularity(o);
    if (*generate) return cmd_generate(o, seed_given);
    if (*converge) return cmd_converge(o);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::EigenFailure ? kExitNumerical : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInput;
}
