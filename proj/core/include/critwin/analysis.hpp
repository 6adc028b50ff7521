#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace critwin {

/// Which integer series is being rescaled.
enum class SeriesKind { HeightProfile, Cousin, Cumulative, Walk };

/// Regime-specific rescaling of an integer series. Exponents per scaling:
///
///   AldousProfile     y = n^{-1/3} Z(h)            t = n^{-1/3} h
///   AldousCousin      y = n^{-1/3} csn(j)          t = n^{-2/3} j
///   AldousCumulative  y = n^{-1} K(j)              t = n^{-2/3} j
///   AldousWalk        y = n^{-1/3} X(i)            t = n^{-2/3} i
///   GeneralProfile    y = theta^{-2} n^{-1/3} Z(h) t = theta n^{-1/3} h
///   GeneralCousin     y = n^{-1} eps^{-2} csn(j)   t = (n eps)^{-1} j
///   GeneralCumulative y = eps^{-3} n^{-2} K(j)     t = (n eps)^{-1} j
///   GeneralWalk       y = theta^{-2} n^{-1/3} X(i) t = (n^{2/3} theta)^{-1} i
///
/// with theta = eps n^{1/3}.
enum class Scaling {
  AldousProfile,
  AldousCousin,
  AldousCumulative,
  AldousWalk,
  GeneralProfile,
  GeneralCousin,
  GeneralCumulative,
  GeneralWalk,
};

SeriesKind series_kind(Scaling scaling);
bool is_general(Scaling scaling);
std::string to_string(Scaling scaling);

struct ScaleFactors {
  double space = 1.0;  ///< multiplies the series value
  double time = 1.0;   ///< multiplies the integer index
};

/// Throws std::invalid_argument when a general scaling lacks epsilon.
ScaleFactors scale_factors(Scaling scaling, std::int64_t n, std::optional<double> epsilon = {});

struct IntegerSeries {
  SeriesKind kind;
  std::vector<std::int64_t> values;
};

/// Right-continuous step path y(t) = values[i] for t in [t_i, t_{i+1}).
struct RescaledPath {
  std::vector<double> t;
  std::vector<double> y;
  Scaling scaling = Scaling::AldousProfile;
  ScaleFactors factors;
  /// Value taken past the last grid point: the last value, or zero.
  bool zero_tail = false;

  [[nodiscard]] double at(double time) const;
};

/// Errors on a series/scaling kind mismatch or missing epsilon.
RescaledPath rescale(const IntegerSeries& series, Scaling scaling, std::int64_t n,
                     std::optional<double> epsilon = {});

/// Recovers the integer series from a path produced by `rescale`.
std::vector<std::int64_t> unscale(const RescaledPath& path);

struct MomentDelta {
  double delta = 0.0;
  double stderr_ = 0.0;
};

/// Outcome of one statistical comparison. The tolerance used is always set.
struct ComparisonReport {
  std::string test_name;
  double statistic = 0.0;
  double tolerance = 0.0;
  double noise_floor = 0.0;
  double discretization_allowance = 0.0;
  std::int64_t n = 0;         ///< problem size of the discrete model (0 if none)
  std::int64_t sample_a = 0;  ///< first sample size (N)
  std::int64_t sample_b = 0;
  std::uint64_t seed = 0;
  std::optional<MomentDelta> mean_delta;
  std::optional<MomentDelta> variance_delta;
  std::optional<double> sup_distance;
  std::optional<double> slope;
  std::optional<double> slope_stderr;
  std::vector<std::pair<std::string, double>> extras;
  bool pass = false;
};

/// Two-sample KS statistic sup_x |F_a(x) - F_b(x)|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// 95% two-sample KS critical value 1.36 * sqrt((na + nb) / (na nb)).
double ks_noise_floor(std::size_t na, std::size_t nb);

/// KS comparison with mean and variance deltas. The tolerance is the noise
/// floor plus `discretization_allowance` unless `tolerance` is given.
ComparisonReport ks_two_sample(std::span<const double> a, std::span<const double> b,
                               double discretization_allowance = 0.0,
                               std::optional<double> tolerance = {});

/// max over path grid points t in [t_lo, t_hi] of |y(t) - reference(t)|.
double sup_distance(const RescaledPath& path, const std::function<double(double)>& reference,
                    double t_lo, double t_hi);

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;  ///< NaN with fewer than three points
  double intercept = 0.0;
  double residual = 0.0;  ///< root-mean-square residual in log space
};

/// Least-squares slope of log(value) against log(n). Requires >= 2 pairs
/// and strictly positive values.
SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> pairs);

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
  [[nodiscard]] double stderr_mean() const;
};

SampleSummary summarize(std::span<const double> sample);

/// Serialises the report as a JSON object with keys test_name, statistic,
/// tolerance, n, N, seed, pass plus the optional diagnostics.
std::string report_json(const ComparisonReport& report);

}  // namespace critwin
