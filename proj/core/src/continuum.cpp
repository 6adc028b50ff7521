#include "critwin/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "critwin/error.hpp"
#include "critwin/parallel.hpp"

namespace critwin {
namespace {

void require_grid(double dt, double t_max) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument(fmt::format("dt must be positive, got {}", dt));
  if (!(t_max >= dt)) throw std::invalid_argument(fmt::format("t_max ({}) must be at least dt ({})", t_max, dt));
}

void require_start(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(fmt::format("x must be positive, got {}", x));
}

double drift(double lambda, double t) { return lambda * t - 0.5 * t * t; }

}  // namespace

double ParabolicBMPath::at(double t) const {
  if (values.empty()) return 0.0;
  if (t <= 0.0) return values.front();
  const double pos = t / dt;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

ParabolicBMPath sample_parabolic_bm(double lambda, double x_offset, double dt, double t_max,
                                    RngStream& rng) {
  require_grid(dt, t_max);
  const std::int64_t steps = step_count(dt, t_max);
  ParabolicBMPath path{.dt = dt, .lambda = lambda, .x_offset = x_offset, .values = {}};
  path.values.reserve(static_cast<std::size_t>(steps) + 1);
  const double sd = std::sqrt(dt);
  double b = 0.0;
  path.values.push_back(x_offset);
  for (std::int64_t i = 1; i <= steps; ++i) {
    b += sd * rng.normal();
    path.values.push_back(x_offset + b + drift(lambda, static_cast<double>(i) * dt));
  }
  return path;
}

SdeStepper::SdeStepper(double z0, double lambda, double dt, double c0)
    : z_(z0), c_(c0), lambda_(lambda), dt_(dt), sqrt_dt_(std::sqrt(dt)) {
  if (!(dt > 0.0)) throw std::invalid_argument(fmt::format("dt must be positive, got {}", dt));
  if (z_ <= 0.0) {
    z_ = 0.0;
    absorbed_ = true;
    absorbed_at_ = 0;
  }
}

void SdeStepper::step(RngStream& rng) {
  ++steps_;
  if (absorbed_) return;
  const double zp = std::max(z_, 0.0);
  const double next = z_ + std::sqrt(zp) * sqrt_dt_ * rng.normal() + (lambda_ - c_) * zp * dt_;
  c_ += zp * dt_;
  if (next <= 0.0) {
    z_ = 0.0;
    absorbed_ = true;
    absorbed_at_ = steps_;
  } else {
    z_ = next;
  }
}

void SdeStepper::advance(std::int64_t steps, RngStream& rng) {
  for (std::int64_t i = 0; i < steps; ++i) {
    if (absorbed_) {
      steps_ += steps - i;
      return;
    }
    step(rng);
  }
}

std::int64_t step_count(double dt, double t_max) {
  return std::max<std::int64_t>(1, std::llround(t_max / dt));
}

SdePath simulate_sde(double x, double lambda, double dt, double t_max, RngStream& rng,
                     std::int64_t stride) {
  require_start(x);
  require_grid(dt, t_max);
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  const std::int64_t steps = step_count(dt, t_max);
  SdePath path;
  path.dt = dt;
  path.stride = stride;
  const auto records = static_cast<std::size_t>(steps / stride) + 1;
  path.Z.reserve(records);
  path.C.reserve(records);
  SdeStepper stepper(x, lambda, dt);
  path.Z.push_back(stepper.z());
  path.C.push_back(stepper.c());
  for (std::int64_t i = 1; i <= steps; ++i) {
    stepper.step(rng);
    if (i % stride == 0) {
      path.Z.push_back(stepper.z());
      path.C.push_back(stepper.c());
    }
  }
  path.absorbed_at = stepper.absorbed_at();
  path.terminal_Z = stepper.z();
  path.terminal_C = stepper.c();
  return path;
}

namespace {

/// x + X^lambda on a grid of step dt, extended on demand until the first
/// grid point at or below zero.
class LazyShiftedBM {
 public:
  LazyShiftedBM(double x, double lambda, double dt, RngStream& rng)
      : lambda_(lambda), dt_(dt), sd_(std::sqrt(dt)), rng_(rng), values_{x} {}

  /// Extends the grid to cover time t or up to the crossing.
  void cover(double t) {
    while (!crossing_ && static_cast<double>(values_.size() - 1) * dt_ <= t + dt_) {
      b_ += sd_ * rng_.normal();
      const double t_next = static_cast<double>(values_.size()) * dt_;
      values_.push_back(values_.front() + b_ + drift(lambda_, t_next));
      if (values_.back() <= 0.0) {
        const std::size_t m = values_.size() - 1;
        const double a = values_[m - 1];
        const double b = values_[m];
        crossing_index_ = m;
        crossing_ = (static_cast<double>(m - 1) + a / (a - b)) * dt_;
      }
    }
  }

  [[nodiscard]] double value(double t) const {
    const double pos = t / dt_;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values_.size()) return values_.back();
    const double frac = pos - static_cast<double>(i);
    return values_[i] + frac * (values_[i + 1] - values_[i]);
  }

  [[nodiscard]] std::optional<double> crossing() const { return crossing_; }
  /// Grid time of the last point before the crossing.
  [[nodiscard]] double last_cell_start() const {
    return static_cast<double>(crossing_index_ - 1) * dt_;
  }

 private:
  double lambda_;
  double dt_;
  double sd_;
  RngStream& rng_;
  std::vector<double> values_;
  double b_ = 0.0;
  std::optional<double> crossing_;
  std::size_t crossing_index_ = 0;
};

}  // namespace

SdePath lamperti_route(double x, double lambda, double dt, double t_max, RngStream& rng,
                       std::int64_t stride) {
  require_start(x);
  require_grid(dt, t_max);
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  const std::int64_t steps = step_count(dt, t_max);
  LazyShiftedBM shifted(x, lambda, dt, rng);
  SdePath path;
  path.dt = dt;
  path.stride = stride;
  double c = 0.0;
  double z = x;
  bool absorbed = false;
  path.Z.push_back(z);
  path.C.push_back(c);
  for (std::int64_t i = 1; i <= steps; ++i) {
    if (!absorbed) {
      c += dt * z;
      shifted.cover(c);
      const auto T = shifted.crossing();
      if (T && c >= shifted.last_cell_start()) {
        c = *T;
        z = 0.0;
        absorbed = true;
        path.absorbed_at = i;
      } else {
        z = shifted.value(c);
      }
    }
    if (i % stride == 0) {
      path.Z.push_back(z);
      path.C.push_back(c);
    }
  }
  path.terminal_Z = z;
  path.terminal_C = c;
  return path;
}

HittingSample sample_hitting_time(double x, double lambda, double dt, double t_max,
                                  RngStream& rng, bool bridge) {
  require_start(x);
  require_grid(dt, t_max);
  RngStream bridge_rng = rng.fork("bridge");
  const std::int64_t steps = step_count(dt, t_max);
  const double sd = std::sqrt(dt);
  double b = 0.0;
  double prev = x;
  for (std::int64_t i = 1; i <= steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    b += sd * rng.normal();
    const double cur = x + b + drift(lambda, t);
    if (cur <= 0.0) return {t, false};
    if (bridge && bridge_rng.uniform() < std::exp(-2.0 * prev * cur / dt)) return {t, false};
    prev = cur;
  }
  return {static_cast<double>(steps) * dt, true};
}

double deterministic_f(double x, double lambda, double t) { return x + lambda * t - 0.5 * t * t; }

double deterministic_t0(double x, double lambda) { return lambda + std::sqrt(lambda * lambda + 2.0 * x); }

DeterministicValues eval_deterministic(double x, double lambda, double t) {
  require_start(x);
  if (!(t >= 0.0)) throw std::invalid_argument(fmt::format("t must be non-negative, got {}", t));
  const double s = std::sqrt(2.0 * x + lambda * lambda);
  const double t0 = lambda + s;
  DeterministicValues v;
  v.f = deterministic_f(x, lambda, t);
  v.c = lambda + s * std::tanh(0.5 * s * t + std::atanh(-lambda / s));
  v.z = std::max(0.0, deterministic_f(x, lambda, v.c));
  const double u = std::min(t, t0);
  v.K = x * u + 0.5 * lambda * u * u - u * u * u / 6.0;
  return v;
}

std::vector<double> integrate_c_rk4(double x, double lambda, double h, double t_end) {
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  const auto f = [&](double c) { return deterministic_f(x, lambda, c); };
  const auto n = static_cast<std::size_t>(std::llround(t_end / h));
  std::vector<double> out;
  out.reserve(n + 1);
  double c = 0.0;
  out.push_back(c);
  for (std::size_t i = 0; i < n; ++i) {
    const double k1 = f(c);
    const double k2 = f(c + 0.5 * h * k1);
    const double k3 = f(c + 0.5 * h * k2);
    const double k4 = f(c + h * k3);
    c += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back(c);
  }
  return out;
}

ComparisonReport self_similarity_test(double x, double lambda, double t0, double s,
                                      std::int64_t N, double dt, const RngStream& rng,
                                      unsigned threads) {
  require_start(x);
  if (!(t0 > 0.0) || !(s >= 0.0)) throw std::invalid_argument("self_similarity_test: need t0 > 0 and s >= 0");
  if (N < 1) throw std::invalid_argument("self_similarity_test: need N >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("self_similarity_test: need dt > 0");
  const std::int64_t warmup = step_count(dt, t0);
  const std::int64_t extra = std::llround(s / dt);
  struct Outcome {
    bool alive = false;
    double continued = 0.0;
    double restarted = 0.0;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(N));
  parallel_for(outcomes.size(), threads, [&](std::size_t i) {
    RngStream path_rng = rng.fork(fmt::format("path-{}", i));
    SdeStepper original(x, lambda, dt);
    original.advance(warmup, path_rng);
    if (original.absorbed()) return;
    const double z = original.z();
    const double mu = original.c();
    RngStream restart_rng = path_rng.fork("restart");
    SdeStepper restarted(z, lambda - mu, dt);
    original.advance(extra, path_rng);
    restarted.advance(extra, restart_rng);
    outcomes[i] = {true, original.z(), restarted.z()};
  });
  std::vector<double> continued;
  std::vector<double> restarted;
  for (const auto& o : outcomes) {
    if (!o.alive) continue;
    continued.push_back(o.continued);
    restarted.push_back(o.restarted);
  }
  if (static_cast<std::int64_t>(continued.size()) * 10 < N) {
    throw InsufficientSampleError(fmt::format(
        "self_similarity_test: only {} of {} paths unabsorbed at t0 = {}", continued.size(), N, t0));
  }
  ComparisonReport report = ks_two_sample(continued, restarted);
  report.test_name = "selfsim";
  report.extras.emplace_back("unabsorbed", static_cast<double>(continued.size()));
  return report;
}

}  // namespace critwin
