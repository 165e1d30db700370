// Generate a planted 3-block graph, read the cluster count off the spectrum,
// recover the blocks with weighted k-means and print quality figures.

#include <iostream>

#include "nmod/nmod.hpp"

int main() {
  const auto model = nmod::BlockModel::planted(3, 40, 0.5, 0.05);
  const auto planted = nmod::generalized_random_graph(model, 2024);
  const auto& g = planted.graph;

  const auto dec = nmod::decompose(g);
  std::cout << "n = " << g.size() << ", volume = " << g.total_volume() << '\n';
  std::cout << "leading |mu|:";
  for (std::size_t i = 1; i <= 5; ++i) std::cout << ' ' << dec.mu(i);
  std::cout << "\nspectral gap = " << nmod::spectral_gap(dec) << '\n';

  const std::size_t k = 3;
  const auto reps = nmod::representatives(dec, g, k);
  const auto result = nmod::weighted_kmeans(reps, k, {20, 300, 7});
  const auto quality = nmod::quality_report(g, dec, result.partition);

  std::size_t agree = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      agree += (result.partition.labels[i] == result.partition.labels[j]) ==
               (planted.truth.labels[i] == planted.truth.labels[j]);
  const double pairs = static_cast<double>(g.size() * (g.size() - 1) / 2);

  std::cout << "k-variance S^2 = " << result.objective << '\n';
  std::cout << "modularity M = " << quality.m_k << " (upper bound " << quality.relaxation_upper << ")\n";
  std::cout << "normalized cut Q = " << quality.q_k << " (lower bound " << quality.relaxation_lower_cut << ")\n";
  std::cout << "pair agreement with planted blocks = " << static_cast<double>(agree) / pairs << '\n';

  const auto cert = nmod::regularity_certificate(g, dec, result.partition, k, {16, 500, 7});
  for (const auto& p : cert.pairs)
    std::cout << "pair (" << p.a << "," << p.b << ") " << nmod::to_string(p.method) << " alpha = " << p.alpha.value_or(0.0)
              << " rho = " << p.rho << '\n';
}
