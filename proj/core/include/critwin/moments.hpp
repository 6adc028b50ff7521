#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "critwin/analysis.hpp"
#include "critwin/window.hpp"

namespace critwin {

/// mu = E[beta], sigma2 = Var[beta], kappa = E[(beta - z)^4] for
/// beta ~ Binomial(n - c, q(n, z)).
struct MomentTriple {
  double mu = 0.0;
  double sigma2 = 0.0;
  double kappa = 0.0;
};

/// Closed form. kappa is assembled from the binomial central moments as
/// kappa4 + 4 kappa3 + 6 kappa2 + kappa0 around the offset mu - z.
MomentTriple moment_triple(std::int64_t n, std::int64_t z, std::int64_t c,
                           const CriticalWindow& window);

/// kappa by direct summation over the log-space binomial mass function.
/// Requires n - c <= 2000.
double kappa_oracle(std::int64_t n, std::int64_t z, std::int64_t c, const CriticalWindow& window);

/// Window family for a sweep: Aldous (no exponent) or general with
/// epsilon = n^{-epsilon_exponent}, i.e. theta = n^{1/3 - a}.
struct SweepFamily {
  double lambda = 1.0;
  std::optional<double> epsilon_exponent;

  [[nodiscard]] CriticalWindow window_at(std::int64_t n) const;
};

enum class SweepQuantity { MeanDeviation, VarianceDeviation, Kappa };
std::string to_string(SweepQuantity q);

struct SweepRow {
  std::int64_t n = 0;
  SweepQuantity quantity = SweepQuantity::MeanDeviation;
  double sup_value = 0.0;
};

struct BoundSweep {
  std::vector<std::int64_t> n_list;
  double r = 1.0;
  double T = 1.0;
  SweepFamily family;
  int grid_density = 64;
  /// One row per (n, quantity), n-major.
  std::vector<SweepRow> rows;
  SlopeFit mean_fit;
  SlopeFit variance_fit;
  SlopeFit kappa_fit;

  [[nodiscard]] std::vector<double> sup_values(SweepQuantity q) const;
};

/// Sup over an evenly spaced integer lattice of the box
/// {0 <= z <= n^{1/3} theta^2 r, 0 <= c <= n^{2/3} theta r T} (corners
/// included) of |mu - z - n^{-1/3} z (lambda theta - n^{-2/3} c)|, the same
/// for sigma2, and |kappa|; theta = 1 for the Aldous family. Fits a log-log
/// slope per quantity. Requires grid_density >= 8.
BoundSweep bound_sweep(const std::vector<std::int64_t>& n_list, double r, double T,
                       const SweepFamily& family, int grid_density = 64);

/// Summary JSON: fitted slopes with standard errors per quantity.
std::string sweep_summary_json(const BoundSweep& sweep);

}  // namespace critwin
