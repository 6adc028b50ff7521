#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "critwin/analysis.hpp"
#include "critwin/rng.hpp"

namespace critwin {

/// x_offset + B(i dt) + lambda (i dt) - (i dt)^2 / 2 on the grid i dt <= t_max.
struct ParabolicBMPath {
  double dt = 0.0;
  double lambda = 0.0;
  double x_offset = 0.0;
  std::vector<double> values;

  [[nodiscard]] double t_max() const { return dt * static_cast<double>(values.size() - 1); }
  /// Linear interpolation; clamps to the grid.
  [[nodiscard]] double at(double t) const;
};

/// Exact Gaussian increments for B; the drift is added per grid point.
/// Requires dt > 0 and t_max >= dt.
ParabolicBMPath sample_parabolic_bm(double lambda, double x_offset, double dt, double t_max,
                                    RngStream& rng);

/// Full-truncation Euler-Maruyama state for
/// dZ = sqrt(Z) dW + (lambda - C) Z dt, dC = Z dt, absorbed at Z <= 0.
class SdeStepper {
 public:
  SdeStepper(double z0, double lambda, double dt, double c0 = 0.0);

  void step(RngStream& rng);
  void advance(std::int64_t steps, RngStream& rng);

  [[nodiscard]] double z() const { return z_; }
  [[nodiscard]] double c() const { return c_; }
  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] bool absorbed() const { return absorbed_; }
  [[nodiscard]] std::int64_t steps_taken() const { return steps_; }
  /// Step index at which Z first dropped to or below zero.
  [[nodiscard]] std::optional<std::int64_t> absorbed_at() const { return absorbed_at_; }

 private:
  double z_;
  double c_;
  double lambda_;
  double dt_;
  double sqrt_dt_;
  bool absorbed_ = false;
  std::int64_t steps_ = 0;
  std::optional<std::int64_t> absorbed_at_;
};

/// Number of dt steps covering [0, t_max] (rounded to nearest).
std::int64_t step_count(double dt, double t_max);

/// Discretised (Z, C) path. Entry i holds the state at time i * stride * dt;
/// absorbed_at is a step index on the dt grid.
struct SdePath {
  double dt = 0.0;
  std::int64_t stride = 1;
  std::vector<double> Z;
  std::vector<double> C;
  std::optional<std::int64_t> absorbed_at;
  double terminal_Z = 0.0;  ///< state at t_max
  double terminal_C = 0.0;

  [[nodiscard]] double time_of(std::size_t i) const {
    return static_cast<double>(i) * static_cast<double>(stride) * dt;
  }
};

/// Requires x > 0, dt > 0, t_max >= dt and stride >= 1.
SdePath simulate_sde(double x, double lambda, double dt, double t_max, RngStream& rng,
                     std::int64_t stride = 1);

/// Time-change route: X^lambda is drawn lazily on a grid of step dt and
/// dC/dt = x + X^lambda(C) is integrated by explicit Euler with linear
/// interpolation. T is the linearly interpolated first crossing of
/// x + X^lambda through zero; once C passes the last grid point before T the
/// path is absorbed with C = T.
SdePath lamperti_route(double x, double lambda, double dt, double t_max, RngStream& rng,
                       std::int64_t stride = 1);

struct HittingSample {
  double T = 0.0;
  bool truncated = false;
};

/// First grid time at which x + X^lambda <= 0. With `bridge`, an interval
/// whose endpoints sit at heights a, b > 0 also counts as crossed with
/// probability exp(-2ab/dt); those uniforms come from a forked stream so the
/// Gaussian path is shared with the grid-only variant. Truncated at t_max.
HittingSample sample_hitting_time(double x, double lambda, double dt, double t_max,
                                  RngStream& rng, bool bridge = true);

/// f(t) = x + lambda t - t^2 / 2.
double deterministic_f(double x, double lambda, double t);
/// Largest root of f: lambda + sqrt(lambda^2 + 2x).
double deterministic_t0(double x, double lambda);

struct DeterministicValues {
  double f = 0.0;  ///< f(t)
  double c = 0.0;  ///< c(t), closed form
  double z = 0.0;  ///< f(c(t)), clamped at 0
  double K = 0.0;  ///< x s + lambda s^2/2 - s^3/6 at s = min(t, t0)
};

/// Requires x > 0 and t >= 0.
DeterministicValues eval_deterministic(double x, double lambda, double t);

/// c(j h) for j = 0..round(t_end / h) by classical RK4 on c' = f(c), c(0) = 0.
std::vector<double> integrate_c_rk4(double x, double lambda, double h, double t_end);

/// Simulates N paths to t0; each unabsorbed path (z, mu) = (Z(t0), C(t0)) is
/// continued for s and, independently, restarted as Z^{lambda - mu} from z
/// for s. Reports KS and mean/variance deltas between the two populations
/// of Z values. Throws InsufficientSampleError when fewer than N/10 paths
/// survive to t0.
ComparisonReport self_similarity_test(double x, double lambda, double t0, double s,
                                      std::int64_t N, double dt, const RngStream& rng,
                                      unsigned threads = 1);

}  // namespace critwin
