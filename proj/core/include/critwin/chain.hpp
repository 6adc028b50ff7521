#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "critwin/config.hpp"
#include "critwin/rng.hpp"
#include "critwin/window.hpp"

namespace critwin {

/// q = 1 - (1 - p)^z, evaluated as -expm1(z * log1p(-p)).
double infection_probability(double p, std::int64_t z);

/// q(n, z) for the window's edge probability at n.
double q_prob(const CriticalWindow& window, std::int64_t n, std::int64_t z);

struct ChainState {
  std::int64_t z = 0;  ///< infectives of the current generation
  std::int64_t c = 0;  ///< ever infected so far
  friend bool operator==(const ChainState&, const ChainState&) = default;
};

/// One generation: z' ~ Binomial(n - c, q(n, z)) if z > 0 and c < n,
/// else z' = 0; c' = c + z'.
ChainState step(ChainState state, double p, std::int64_t n, RngStream& rng);
ChainState step(ChainState state, const CriticalWindow& window, std::int64_t n, RngStream& rng);

/// Height profile path of the Reed-Frost chain. Z and C list the generations
/// up to the last non-empty one; the absorbing zero is implicit at
/// h = Z.size() unless the trace is truncated.
struct EpidemicTrace {
  std::vector<std::int64_t> Z;
  std::vector<std::int64_t> C;
  CriticalWindow window;
  std::int64_t n = 0;
  std::int64_t k = 0;
  bool truncated = false;

  [[nodiscard]] std::int64_t total_infected() const { return C.empty() ? 0 : C.back(); }
  /// Z(h) with the absorbing zeros filled in past the recorded path.
  [[nodiscard]] std::int64_t Z_at(std::int64_t h) const {
    return h >= 0 && h < static_cast<std::int64_t>(Z.size()) ? Z[h] : 0;
  }
  [[nodiscard]] std::int64_t C_at(std::int64_t h) const {
    if (h < 0) return 0;
    return h < static_cast<std::int64_t>(C.size()) ? C[h] : total_infected();
  }
};

/// 50 * ceil(n^{1/3}) for the Aldous window, 50 * ceil(1/epsilon) otherwise.
std::int64_t default_max_steps(const CriticalWindow& window, std::int64_t n);

/// Iterates `step` from (k, k) until absorption or `max_steps` generations.
EpidemicTrace simulate_trace(std::int64_t n, std::int64_t k, const CriticalWindow& window,
                             std::int64_t max_steps, RngStream& rng);
EpidemicTrace simulate_trace(const RunConfig& config, std::int64_t max_steps, RngStream& rng);

/// Exact transition table P[(z, c) -> z'] for small n.
class KernelTable {
 public:
  KernelTable(std::int64_t n, double p);

  [[nodiscard]] std::int64_t n() const { return n_; }
  [[nodiscard]] double probability(std::int64_t z, std::int64_t c, std::int64_t z_next) const;
  /// Row over z' = 0..n - c.
  [[nodiscard]] const std::vector<double>& row(std::int64_t z, std::int64_t c) const;

 private:
  std::int64_t n_;
  double p_;
  std::vector<std::vector<double>> rows_;  ///< index z * (n + 1) + c
};

/// Binomial(trials, q) mass function by direct product (no sampling).
std::vector<double> binomial_pmf(std::int64_t trials, double q);

/// Largest n accepted by exact_profile_distribution.
inline constexpr std::int64_t kExactProfileMaxN = 12;

/// Keys are Z(0), Z(1), ... up to and including the first zero (or up to
/// Z(horizon) when the path is still alive there).
using ProfileDistribution = std::map<std::vector<std::int64_t>, double>;

/// Forward dynamic programme over (h, z, c) with the exact kernel. Throws
/// std::invalid_argument for n > kExactProfileMaxN. Horizon is capped at n.
ProfileDistribution exact_profile_distribution(std::int64_t n, std::int64_t k, double p,
                                               std::int64_t horizon);

}  // namespace critwin
