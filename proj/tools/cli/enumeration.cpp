#include "cli/enumeration.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace critwin::cli {
namespace {

/// Breadth-first layer sizes from a root mask over an adjacency matrix.
std::vector<std::int64_t> layer_sizes(const std::vector<std::uint32_t>& adj, std::uint32_t roots) {
  std::vector<std::int64_t> sizes;
  std::uint32_t seen = roots;
  std::uint32_t frontier = roots;
  while (frontier != 0) {
    sizes.push_back(std::popcount(frontier));
    std::uint32_t next = 0;
    for (std::size_t v = 0; v < adj.size(); ++v) {
      if (frontier & (1u << v)) next |= adj[v];
    }
    frontier = next & ~seen;
    seen |= frontier;
  }
  sizes.push_back(0);
  return sizes;
}

template <class Visit>
void for_each_weighted_profile(std::int64_t n, std::int64_t k, double p, Visit&& visit) {
  if (n < 1 || n > 7) throw std::invalid_argument("graph enumeration supports 1 <= n <= 7");
  if (k < 1 || k > n) throw std::invalid_argument("graph enumeration needs 1 <= k <= n");
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  }
  std::vector<std::uint32_t> root_sets;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) == k) root_sets.push_back(mask);
  }
  const auto m = pairs.size();
  for (std::uint64_t edges = 0; edges < (std::uint64_t{1} << m); ++edges) {
    std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
    int present = 0;
    for (std::size_t e = 0; e < m; ++e) {
      if (edges & (std::uint64_t{1} << e)) {
        adj[pairs[e].first] |= 1u << pairs[e].second;
        adj[pairs[e].second] |= 1u << pairs[e].first;
        ++present;
      }
    }
    const double weight = std::pow(p, present) * std::pow(1.0 - p, static_cast<double>(m) - present) /
                          static_cast<double>(root_sets.size());
    for (const auto roots : root_sets) visit(layer_sizes(adj, roots), weight);
  }
}

}  // namespace

ProfileDistribution enumerate_graph_profiles(std::int64_t n, std::int64_t k, double p) {
  ProfileDistribution law;
  for_each_weighted_profile(n, k, p, [&](const std::vector<std::int64_t>& sizes, double w) {
    law[sizes] += w;
  });
  return law;
}

ProfileDistribution enumerate_graph_prefix(std::int64_t n, std::int64_t k, double p, std::int64_t depth) {
  ProfileDistribution law;
  for_each_weighted_profile(n, k, p, [&](const std::vector<std::int64_t>& sizes, double w) {
    std::vector<std::int64_t> prefix(static_cast<std::size_t>(depth) + 1, 0);
    for (std::size_t h = 0; h < prefix.size() && h < sizes.size(); ++h) prefix[h] = sizes[h];
    law[prefix] += w;
  });
  return law;
}

double total_variation(const ProfileDistribution& a, const ProfileDistribution& b) {
  double sum = 0.0;
  for (const auto& [key, mass] : a) {
    const auto it = b.find(key);
    sum += std::abs(mass - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [key, mass] : b) {
    if (!a.contains(key)) sum += mass;
  }
  return 0.5 * sum;
}

}  // namespace critwin::cli
