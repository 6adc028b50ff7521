#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace critwin {

/// p(n) = 1/n + lambda * n^{-4/3}.
struct AldousWindow {
  double lambda = 0.0;
};

/// p(n) = (1 + lambda * epsilon) / n. The epsilon value is supplied per run;
/// sweeps over n are expected to pass epsilon = n^{-a} themselves.
struct GeneralWindow {
  double lambda = 0.0;
  double epsilon = 0.0;
};

using CriticalWindow = std::variant<AldousWindow, GeneralWindow>;

/// Edge probability of G(n, p) for the window. Throws InvalidWindowError
/// unless 0 < p < 1 (or n < 2, or epsilon <= 0 for the general window).
double edge_probability(const CriticalWindow& window, std::int64_t n);

double window_lambda(const CriticalWindow& window);
std::optional<double> window_epsilon(const CriticalWindow& window);
bool is_general(const CriticalWindow& window);

/// theta = epsilon * n^{1/3}; equals 1 for the Aldous window.
double window_theta(const CriticalWindow& window, std::int64_t n);

/// Whether epsilon^3 * n exceeds `threshold`. Always true for the Aldous
/// window. Violations are recorded by callers, never rejected.
bool regime_condition_met(const CriticalWindow& window, std::int64_t n,
                          double threshold);

std::string describe(const CriticalWindow& window);

}  // namespace critwin
