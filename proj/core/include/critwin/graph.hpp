#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "critwin/rng.hpp"

namespace critwin {

using Vertex = std::int32_t;

/// Simple undirected graph on vertices 0..n-1 in CSR form. Neighbor lists
/// are sorted, symmetric, free of self-loops and duplicates.
class GraphSample {
 public:
  GraphSample() = default;

  /// Builds the CSR arrays from an undirected edge list. Throws
  /// std::invalid_argument on self-loops, duplicates or out-of-range ids.
  static GraphSample from_edges(std::int64_t n, double p,
                                std::span<const std::pair<Vertex, Vertex>> edges);

  [[nodiscard]] std::int64_t vertex_count() const { return n_; }
  [[nodiscard]] double edge_probability() const { return p_; }
  [[nodiscard]] std::int64_t edge_count() const {
    return static_cast<std::int64_t>(adjacency_.size() / 2);
  }
  [[nodiscard]] std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

 private:
  std::int64_t n_ = 0;
  double p_ = 0.0;
  std::vector<std::int64_t> offsets_{0};
  std::vector<Vertex> adjacency_;
};

/// G(n, p). Uses geometric skipping over the pair enumeration when n*p <= 64
/// and one Bernoulli draw per pair otherwise; both are exact.
GraphSample sample_graph(std::int64_t n, double p, RngStream& rng);

/// Multi-source breadth-first labeling from k roots.
struct Exploration {
  std::vector<Vertex> roots;
  /// Breadth-first sequence w(0), ..., w(A-1); the roots come first.
  std::vector<Vertex> order;
  /// height[j] = hgt(w(j)); non-decreasing in j.
  std::vector<std::int32_t> height;

  [[nodiscard]] std::int64_t explored() const { return static_cast<std::int64_t>(order.size()); }
  [[nodiscard]] std::int32_t max_height() const { return height.empty() ? -1 : height.back(); }
};

/// Draws k distinct roots uniformly (sparse partial Fisher-Yates) and
/// explores from them. Requires 1 <= k <= n.
Exploration explore(const GraphSample& graph, std::int64_t k, RngStream& rng);

/// Deterministic exploration from the given distinct roots. Unlabeled
/// neighbors of w(j) are appended in ascending vertex id.
Exploration explore_from_roots(const GraphSample& graph, std::span<const Vertex> roots);

/// Per-vertex heights (-1 where unreachable from every root).
std::vector<std::int32_t> height_by_vertex(const Exploration& expl, std::int64_t n);

struct CousinSeries {
  std::vector<std::int64_t> csn;  ///< csn(j), j < A
  std::vector<std::int64_t> K;    ///< K(j) = sum_{i<j} csn(i), j <= A
  std::vector<std::int64_t> Z;    ///< height profile Z(h), h <= max height
  std::vector<std::int64_t> C;    ///< C(h) = sum_{l<=h} Z(l)
};

CousinSeries cousin_series(const Exploration& expl);

/// Number of vertices joined to some root (A = sum_h Z(h)).
std::int64_t infected_total(const Exploration& expl);

/// Cousin statistic and cumulative cousin process evaluated straight from a
/// height profile (Z, C) without materialising the per-vertex series.
/// Indices past the explored set give csn = 0 and K = K(A).
class ProfileCousinView {
 public:
  ProfileCousinView(std::span<const std::int64_t> Z, std::span<const std::int64_t> C);

  [[nodiscard]] std::int64_t total() const { return C_.empty() ? 0 : C_.back(); }
  [[nodiscard]] std::int64_t csn(std::int64_t j) const;
  [[nodiscard]] std::int64_t cumulative(std::int64_t j) const;
  /// Height of w(j), or -1 past the explored set.
  [[nodiscard]] std::int64_t height_of_index(std::int64_t j) const;

 private:
  std::span<const std::int64_t> Z_;
  std::span<const std::int64_t> C_;
  std::vector<std::int64_t> squares_;  ///< squares_[h] = sum_{l<h} Z(l)^2
};

/// Breadth-first walk over all components: X(0) = 0 and
/// X(i+1) = X(i) + (new neighbors of the i-th explored vertex) - 1.
struct WalkPath {
  std::vector<std::int64_t> X;
};

/// Starts from a uniform vertex and restarts at a uniform unexplored vertex
/// each time a component is exhausted.
WalkPath breadth_first_walk(const GraphSample& graph, RngStream& rng);

}  // namespace critwin
