#include "critwin/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

#include "critwin/variates.hpp"

namespace critwin {

GraphSample GraphSample::from_edges(std::int64_t n, double p,
                                    std::span<const std::pair<Vertex, Vertex>> edges) {
  GraphSample g;
  g.n_ = n;
  g.p_ = p;
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw std::invalid_argument(fmt::format("edge ({}, {}) out of range for n = {}", u, v, n));
    }
    if (u == v) throw std::invalid_argument(fmt::format("self-loop at vertex {}", u));
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (std::size_t i = 1; i < g.offsets_.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
  g.adjacency_.resize(static_cast<std::size_t>(g.offsets_.back()));
  std::vector<std::int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    g.adjacency_[cursor[u]++] = v;
    g.adjacency_[cursor[v]++] = u;
  }
  for (std::int64_t v = 0; v < n; ++v) {
    const auto first = g.adjacency_.begin() + g.offsets_[v];
    const auto last = g.adjacency_.begin() + g.offsets_[v + 1];
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last) {
      throw std::invalid_argument(fmt::format("duplicate edge at vertex {}", v));
    }
  }
  return g;
}

GraphSample sample_graph(std::int64_t n, double p, RngStream& rng) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  if (n >= 2 && p > 0.0) {
    if (p >= 1.0) {
      for (Vertex v = 1; v < n; ++v) {
        for (Vertex w = 0; w < v; ++w) edges.emplace_back(v, w);
      }
    } else if (static_cast<double>(n) * p <= 64.0) {
      // Batagelj-Brandes: jump over Geometric(p) non-edges in the ordering
      // (1,0), (2,0), (2,1), (3,0), ...
      edges.reserve(static_cast<std::size_t>(0.5 * static_cast<double>(n) * static_cast<double>(n - 1) * p * 1.1) + 16);
      std::int64_t v = 1;
      std::int64_t w = -1;
      while (v < n) {
        w += 1 + sample_geometric(rng, p);
        while (w >= v && v < n) {
          w -= v;
          ++v;
        }
        if (v < n) edges.emplace_back(static_cast<Vertex>(v), static_cast<Vertex>(w));
      }
    } else {
      for (Vertex v = 1; v < n; ++v) {
        for (Vertex w = 0; w < v; ++w) {
          if (rng.uniform() < p) edges.emplace_back(v, w);
        }
      }
    }
  }
  return GraphSample::from_edges(n, p, edges);
}

Exploration explore(const GraphSample& graph, std::int64_t k, RngStream& rng) {
  const std::int64_t n = graph.vertex_count();
  if (k < 1 || k > n) {
    throw std::invalid_argument(fmt::format("explore: need 1 <= k <= n (k = {}, n = {})", k, n));
  }
  // Sparse partial Fisher-Yates over the identity permutation.
  std::unordered_map<std::int64_t, std::int64_t> swapped;
  swapped.reserve(static_cast<std::size_t>(2 * k));
  const auto value_at = [&](std::int64_t i) {
    const auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  std::vector<Vertex> roots;
  roots.reserve(static_cast<std::size_t>(k));
  for (std::int64_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(n - i)));
    const std::int64_t vi = value_at(i);
    const std::int64_t vj = value_at(j);
    swapped[j] = vi;
    swapped[i] = vj;
    roots.push_back(static_cast<Vertex>(vj));
  }
  return explore_from_roots(graph, roots);
}

Exploration explore_from_roots(const GraphSample& graph, std::span<const Vertex> roots) {
  const std::int64_t n = graph.vertex_count();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  Exploration expl;
  expl.roots.assign(roots.begin(), roots.end());
  expl.order.reserve(roots.size());
  for (const Vertex r : roots) {
    if (r < 0 || r >= n || seen[r]) {
      throw std::invalid_argument(fmt::format("explore: invalid or repeated root {}", r));
    }
    seen[r] = 1;
    expl.order.push_back(r);
    expl.height.push_back(0);
  }
  for (std::size_t head = 0; head < expl.order.size(); ++head) {
    const Vertex v = expl.order[head];
    const std::int32_t next_height = expl.height[head] + 1;
    for (const Vertex w : graph.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        expl.order.push_back(w);
        expl.height.push_back(next_height);
      }
    }
  }
  return expl;
}

std::vector<std::int32_t> height_by_vertex(const Exploration& expl, std::int64_t n) {
  std::vector<std::int32_t> h(static_cast<std::size_t>(n), -1);
  for (std::size_t j = 0; j < expl.order.size(); ++j) h[expl.order[j]] = expl.height[j];
  return h;
}

CousinSeries cousin_series(const Exploration& expl) {
  CousinSeries s;
  const std::size_t a = expl.order.size();
  s.Z.assign(static_cast<std::size_t>(expl.max_height() + 1), 0);
  for (const auto h : expl.height) ++s.Z[h];
  s.C.resize(s.Z.size());
  std::int64_t running = 0;
  for (std::size_t h = 0; h < s.Z.size(); ++h) s.C[h] = running += s.Z[h];
  s.csn.resize(a);
  s.K.resize(a + 1);
  s.K[0] = 0;
  for (std::size_t j = 0; j < a; ++j) {
    s.csn[j] = s.Z[expl.height[j]];
    s.K[j + 1] = s.K[j] + s.csn[j];
  }
  return s;
}

std::int64_t infected_total(const Exploration& expl) { return expl.explored(); }

ProfileCousinView::ProfileCousinView(std::span<const std::int64_t> Z, std::span<const std::int64_t> C)
    : Z_(Z), C_(C) {
  if (Z.size() != C.size()) throw std::invalid_argument("ProfileCousinView: Z and C lengths differ");
  squares_.resize(Z.size() + 1);
  squares_[0] = 0;
  for (std::size_t h = 0; h < Z.size(); ++h) squares_[h + 1] = squares_[h] + Z[h] * Z[h];
}

std::int64_t ProfileCousinView::height_of_index(std::int64_t j) const {
  if (j < 0 || j >= total()) return -1;
  // First h with C(h) > j.
  const auto it = std::upper_bound(C_.begin(), C_.end(), j);
  return static_cast<std::int64_t>(it - C_.begin());
}

std::int64_t ProfileCousinView::csn(std::int64_t j) const {
  const auto h = height_of_index(j);
  return h < 0 ? 0 : Z_[h];
}

std::int64_t ProfileCousinView::cumulative(std::int64_t j) const {
  if (j <= 0) return 0;
  if (j >= total()) return squares_.back();
  const auto h = height_of_index(j);
  const std::int64_t layer_start = h == 0 ? 0 : C_[h - 1];
  return squares_[h] + (j - layer_start) * Z_[h];
}

WalkPath breadth_first_walk(const GraphSample& graph, RngStream& rng) {
  const std::int64_t n = graph.vertex_count();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Vertex> queue;
  queue.reserve(static_cast<std::size_t>(n));
  std::vector<Vertex> perm(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) perm[i] = static_cast<Vertex>(i);
  std::int64_t perm_pos = 0;

  WalkPath walk;
  walk.X.reserve(static_cast<std::size_t>(n) + 1);
  walk.X.push_back(0);
  std::size_t head = 0;
  while (static_cast<std::int64_t>(walk.X.size()) <= n) {
    if (head == queue.size()) {
      // Component exhausted: draw the next fresh vertex by incremental
      // Fisher-Yates, skipping ones already reached.
      Vertex start = -1;
      while (start < 0) {
        const auto j = perm_pos + static_cast<std::int64_t>(
                                      rng.uniform_index(static_cast<std::uint64_t>(n - perm_pos)));
        std::swap(perm[perm_pos], perm[j]);
        const Vertex candidate = perm[perm_pos++];
        if (!seen[candidate]) start = candidate;
      }
      seen[start] = 1;
      queue.push_back(start);
    }
    const Vertex v = queue[head++];
    std::int64_t children = 0;
    for (const Vertex w : graph.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
        ++children;
      }
    }
    walk.X.push_back(walk.X.back() + children - 1);
  }
  return walk;
}

}  // namespace critwin
