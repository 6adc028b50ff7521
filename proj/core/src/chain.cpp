#include "critwin/chain.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "critwin/variates.hpp"

namespace critwin {

double infection_probability(double p, std::int64_t z) {
  if (z <= 0) return 0.0;
  return -std::expm1(static_cast<double>(z) * std::log1p(-p));
}

double q_prob(const CriticalWindow& window, std::int64_t n, std::int64_t z) {
  return infection_probability(edge_probability(window, n), z);
}

ChainState step(ChainState state, double p, std::int64_t n, RngStream& rng) {
  if (state.z <= 0 || state.c >= n) return {0, state.c};
  const std::int64_t next = sample_binomial(rng, n - state.c, infection_probability(p, state.z));
  return {next, state.c + next};
}

ChainState step(ChainState state, const CriticalWindow& window, std::int64_t n, RngStream& rng) {
  return step(state, edge_probability(window, n), n, rng);
}

std::int64_t default_max_steps(const CriticalWindow& window, std::int64_t n) {
  if (const auto eps = window_epsilon(window)) {
    return 50 * static_cast<std::int64_t>(std::ceil(1.0 / *eps));
  }
  return 50 * static_cast<std::int64_t>(std::ceil(std::cbrt(static_cast<double>(n))));
}

EpidemicTrace simulate_trace(std::int64_t n, std::int64_t k, const CriticalWindow& window,
                             std::int64_t max_steps, RngStream& rng) {
  if (max_steps < 1) throw std::invalid_argument("simulate_trace: max_steps must be >= 1");
  if (k < 1 || k > n) {
    throw std::invalid_argument(fmt::format("simulate_trace: need 1 <= k <= n (k = {}, n = {})", k, n));
  }
  const double p = edge_probability(window, n);
  EpidemicTrace trace{.Z = {k}, .C = {k}, .window = window, .n = n, .k = k, .truncated = false};
  ChainState state{k, k};
  for (std::int64_t h = 0;; ++h) {
    if (h >= max_steps) {
      trace.truncated = true;
      break;
    }
    state = step(state, p, n, rng);
    if (state.z == 0) break;
    trace.Z.push_back(state.z);
    trace.C.push_back(state.c);
  }
  return trace;
}

EpidemicTrace simulate_trace(const RunConfig& config, std::int64_t max_steps, RngStream& rng) {
  return simulate_trace(config.n, derive_k(config), config.window, max_steps, rng);
}

std::vector<double> binomial_pmf(std::int64_t trials, double q) {
  std::vector<double> pmf(static_cast<std::size_t>(trials) + 1, 0.0);
  if (q <= 0.0) {
    pmf.front() = 1.0;
    return pmf;
  }
  if (q >= 1.0) {
    pmf.back() = 1.0;
    return pmf;
  }
  const auto nd = static_cast<double>(trials);
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  const double log_nfact = std::lgamma(nd + 1.0);
  for (std::int64_t m = 0; m <= trials; ++m) {
    const auto md = static_cast<double>(m);
    pmf[m] = std::exp(log_nfact - std::lgamma(md + 1.0) - std::lgamma(nd - md + 1.0) + md * log_q +
                      (nd - md) * log_1mq);
  }
  return pmf;
}

KernelTable::KernelTable(std::int64_t n, double p) : n_(n), p_(p) {
  if (n < 1 || n > 4096) throw std::invalid_argument("KernelTable: n out of range");
  rows_.resize(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (std::int64_t z = 0; z <= n; ++z) {
    for (std::int64_t c = 0; c <= n; ++c) {
      auto& row = rows_[z * (n + 1) + c];
      if (z > 0 && c < n) {
        row = binomial_pmf(n - c, infection_probability(p_, z));
      } else {
        row.assign(static_cast<std::size_t>(n - c) + 1, 0.0);
        row[0] = 1.0;
      }
    }
  }
}

const std::vector<double>& KernelTable::row(std::int64_t z, std::int64_t c) const {
  if (z < 0 || z > n_ || c < 0 || c > n_) throw std::out_of_range("KernelTable: state out of range");
  return rows_[z * (n_ + 1) + c];
}

double KernelTable::probability(std::int64_t z, std::int64_t c, std::int64_t z_next) const {
  const auto& r = row(z, c);
  return z_next >= 0 && z_next < static_cast<std::int64_t>(r.size()) ? r[z_next] : 0.0;
}

ProfileDistribution exact_profile_distribution(std::int64_t n, std::int64_t k, double p,
                                               std::int64_t horizon) {
  if (n > kExactProfileMaxN) {
    throw std::invalid_argument(fmt::format(
        "exact_profile_distribution: n = {} exceeds {}; the path space grows like 2^n, "
        "use Monte Carlo (simulate_trace) instead",
        n, kExactProfileMaxN));
  }
  if (k < 1 || k > n) throw std::invalid_argument("exact_profile_distribution: need 1 <= k <= n");
  horizon = std::min(horizon, n);
  const KernelTable kernel(n, p);

  struct Partial {
    std::vector<std::int64_t> path;
    std::int64_t c;
    double mass;
  };
  ProfileDistribution out;
  std::vector<Partial> alive{{{k}, k, 1.0}};
  for (std::int64_t h = 0; h < horizon && !alive.empty(); ++h) {
    std::vector<Partial> next;
    for (const auto& part : alive) {
      const auto& row = kernel.row(part.path.back(), part.c);
      for (std::size_t z = 0; z < row.size(); ++z) {
        if (row[z] == 0.0) continue;
        auto path = part.path;
        path.push_back(static_cast<std::int64_t>(z));
        if (z == 0) {
          out[std::move(path)] += part.mass * row[z];
        } else {
          next.push_back({std::move(path), part.c + static_cast<std::int64_t>(z), part.mass * row[z]});
        }
      }
    }
    alive = std::move(next);
  }
  for (auto& part : alive) out[std::move(part.path)] += part.mass;
  return out;
}

}  // namespace critwin
