#include "critwin/moments.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "critwin/chain.hpp"

namespace critwin {

MomentTriple moment_triple(std::int64_t n, std::int64_t z, std::int64_t c,
                           const CriticalWindow& window) {
  if (c < 0 || c > n || z < 0 || z > n) {
    throw std::invalid_argument(fmt::format("moment_triple: state (z = {}, c = {}) outside [0, {}]", z, c, n));
  }
  const double q = q_prob(window, n, z);
  const auto trials = static_cast<double>(n - c);
  MomentTriple m;
  m.mu = trials * q;
  m.sigma2 = trials * q * (1.0 - q);
  const double offset = m.mu - static_cast<double>(z);
  const double k4 = m.sigma2 * (1.0 + 3.0 * (trials - 2.0) * (q - q * q));
  const double k3 = m.sigma2 * (1.0 - 2.0 * q) * offset;
  const double k2 = m.sigma2 * offset * offset;
  const double k0 = offset * offset * offset * offset;
  m.kappa = k4 + 4.0 * k3 + 6.0 * k2 + k0;
  return m;
}

double kappa_oracle(std::int64_t n, std::int64_t z, std::int64_t c, const CriticalWindow& window) {
  const std::int64_t trials = n - c;
  if (trials < 0 || trials > 2000) throw std::invalid_argument("kappa_oracle: need 0 <= n - c <= 2000");
  const double q = q_prob(window, n, z);
  const auto zd = static_cast<double>(z);
  if (q <= 0.0) return zd * zd * zd * zd;  // beta == 0
  if (q >= 1.0) {
    const double d = static_cast<double>(trials) - zd;
    return d * d * d * d;
  }
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  const auto td = static_cast<double>(trials);
  const double log_n_fact = std::lgamma(td + 1.0);
  double sum = 0.0;
  for (std::int64_t m = 0; m <= trials; ++m) {
    const auto md = static_cast<double>(m);
    const double log_pmf = log_n_fact - std::lgamma(md + 1.0) - std::lgamma(td - md + 1.0) +
                           md * log_q + (td - md) * log_1mq;
    const double d = md - zd;
    sum += d * d * d * d * std::exp(log_pmf);
  }
  return sum;
}

CriticalWindow SweepFamily::window_at(std::int64_t n) const {
  if (epsilon_exponent) {
    return GeneralWindow{lambda, std::pow(static_cast<double>(n), -*epsilon_exponent)};
  }
  return AldousWindow{lambda};
}

std::string to_string(SweepQuantity q) {
  switch (q) {
    case SweepQuantity::MeanDeviation: return "mu";
    case SweepQuantity::VarianceDeviation: return "sigma2";
    case SweepQuantity::Kappa: return "kappa";
  }
  return "unknown";
}

std::vector<double> BoundSweep::sup_values(SweepQuantity q) const {
  std::vector<double> out;
  for (const auto& row : rows) {
    if (row.quantity == q) out.push_back(row.sup_value);
  }
  return out;
}

namespace {

std::vector<std::int64_t> lattice(std::int64_t upper, int density) {
  std::vector<std::int64_t> points;
  if (upper <= 0) return {0};
  for (int i = 0; i < density; ++i) {
    const auto v = static_cast<std::int64_t>(
        std::llround(static_cast<double>(upper) * i / static_cast<double>(density - 1)));
    if (points.empty() || points.back() != v) points.push_back(v);
  }
  return points;
}

SlopeFit fit_quantity(const BoundSweep& sweep, SweepQuantity q) {
  std::vector<std::pair<double, double>> pairs;
  const auto values = sweep.sup_values(q);
  for (std::size_t i = 0; i < values.size(); ++i) {
    pairs.emplace_back(static_cast<double>(sweep.n_list[i]), values[i]);
  }
  return fit_loglog_slope(pairs);
}

}  // namespace

BoundSweep bound_sweep(const std::vector<std::int64_t>& n_list, double r, double T,
                       const SweepFamily& family, int grid_density) {
  if (grid_density < 8) throw std::invalid_argument("bound_sweep: grid_density must be >= 8");
  BoundSweep sweep;
  sweep.n_list = n_list;
  sweep.r = r;
  sweep.T = T;
  sweep.family = family;
  sweep.grid_density = grid_density;
  for (const std::int64_t n : n_list) {
    const CriticalWindow window = family.window_at(n);
    const auto nd = static_cast<double>(n);
    const double n13 = std::cbrt(nd);
    const double theta = window_theta(window, n);
    const double lambda_eff = family.lambda * theta;
    const auto z_max = static_cast<std::int64_t>(std::floor(n13 * theta * theta * r));
    const auto c_max = std::min<std::int64_t>(
        n, static_cast<std::int64_t>(std::floor(n13 * n13 * theta * r * T)));
    double sup_mu = 0.0;
    double sup_sigma = 0.0;
    double sup_kappa = 0.0;
    for (const auto z : lattice(std::min(z_max, n), grid_density)) {
      for (const auto c : lattice(c_max, grid_density)) {
        const auto m = moment_triple(n, z, c, window);
        const auto zd = static_cast<double>(z);
        const double centre = zd + zd / n13 * (lambda_eff - static_cast<double>(c) / (n13 * n13));
        sup_mu = std::max(sup_mu, std::abs(m.mu - centre));
        sup_sigma = std::max(sup_sigma, std::abs(m.sigma2 - centre));
        sup_kappa = std::max(sup_kappa, std::abs(m.kappa));
      }
    }
    sweep.rows.push_back({n, SweepQuantity::MeanDeviation, sup_mu});
    sweep.rows.push_back({n, SweepQuantity::VarianceDeviation, sup_sigma});
    sweep.rows.push_back({n, SweepQuantity::Kappa, sup_kappa});
  }
  sweep.mean_fit = fit_quantity(sweep, SweepQuantity::MeanDeviation);
  sweep.variance_fit = fit_quantity(sweep, SweepQuantity::VarianceDeviation);
  sweep.kappa_fit = fit_quantity(sweep, SweepQuantity::Kappa);
  return sweep;
}

std::string sweep_summary_json(const BoundSweep& sweep) {
  const auto fit_json = [](const SlopeFit& f) {
    nlohmann::ordered_json j;
    j["slope"] = f.slope;
    j["stderr"] = std::isfinite(f.stderr_) ? nlohmann::ordered_json(f.stderr_) : nlohmann::ordered_json(nullptr);
    j["residual"] = f.residual;
    return j;
  };
  nlohmann::ordered_json j;
  j["n"] = sweep.n_list;
  j["r"] = sweep.r;
  j["T"] = sweep.T;
  j["lambda"] = sweep.family.lambda;
  j["epsilon_exponent"] = sweep.family.epsilon_exponent ? nlohmann::ordered_json(*sweep.family.epsilon_exponent)
                                                        : nlohmann::ordered_json(nullptr);
  j["grid_density"] = sweep.grid_density;
  j["slopes"] = {{"mu", fit_json(sweep.mean_fit)},
                 {"sigma2", fit_json(sweep.variance_fit)},
                 {"kappa", fit_json(sweep.kappa_fit)}};
  return j.dump();
}

}  // namespace critwin
