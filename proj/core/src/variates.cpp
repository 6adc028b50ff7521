#include "critwin/variates.hpp"

#include <algorithm>
#include <cmath>

namespace critwin {
namespace {

// Inversion by sequential search from 0; used when trials * p < 30.
std::int64_t binomial_inversion(RngStream& rng, std::int64_t trials, double p) {
  const double q = 1.0 - p;
  const auto n = static_cast<double>(trials);
  const double q_to_n = std::exp(n * std::log1p(-p));
  const double np = n * p;
  const double bound = std::min(n, np + 10.0 * std::sqrt(np * q + 1.0));
  for (;;) {
    double u = rng.uniform();
    double px = q_to_n;
    std::int64_t x = 0;
    bool restart = false;
    while (u > px) {
      ++x;
      if (static_cast<double>(x) > bound) {
        restart = true;
        break;
      }
      u -= px;
      px = (n - static_cast<double>(x) + 1.0) * p * px / (static_cast<double>(x) * q);
    }
    if (!restart) return x;
  }
}

double stirling_tail(double v) {
  const double v2 = v * v;
  return (13680.0 - (462.0 - (132.0 - (99.0 - 140.0 / v2) / v2) / v2) / v2) / v / 166320.0;
}

// Kachitvichyanukul & Schmeiser (1988) BTPE; p <= 1/2 and trials * p >= 30.
std::int64_t binomial_btpe(RngStream& rng, std::int64_t trials, double r) {
  const auto n = static_cast<double>(trials);
  const double q = 1.0 - r;
  const double fm = n * r + r;
  const auto m = static_cast<std::int64_t>(std::floor(fm));
  const auto md = static_cast<double>(m);
  const double nrq = n * r * q;
  const double p1 = std::floor(2.195 * std::sqrt(nrq) - 4.6 * q) + 0.5;
  const double xm = md + 0.5;
  const double xl = xm - p1;
  const double xr = xm + p1;
  const double c = 0.134 + 20.5 / (15.3 + md);
  double a = (fm - xl) / (fm - xl * r);
  const double lambda_l = a * (1.0 + a / 2.0);
  a = (xr - fm) / (xr * q);
  const double lambda_r = a * (1.0 + a / 2.0);
  const double p2 = p1 * (1.0 + 2.0 * c);
  const double p3 = p2 + c / lambda_l;
  const double p4 = p3 + c / lambda_r;

  for (;;) {
    const double u = rng.uniform() * p4;
    double v = rng.uniform();
    std::int64_t y = 0;
    if (u <= p1) {
      // Triangular centre: accepted immediately.
      return static_cast<std::int64_t>(std::floor(xm - p1 * v + u));
    }
    if (u <= p2) {
      const double x = xl + (u - p1) / c;
      v = v * c + 1.0 - std::abs(md - x + 0.5) / p1;
      if (v > 1.0) continue;
      y = static_cast<std::int64_t>(std::floor(x));
    } else if (u <= p3) {
      if (v == 0.0) continue;
      const double yl = std::floor(xl + std::log(v) / lambda_l);
      if (yl < 0.0) continue;
      y = static_cast<std::int64_t>(yl);
      v = v * (u - p2) * lambda_l;
    } else {
      if (v == 0.0) continue;
      const double yr = std::floor(xr - std::log(v) / lambda_r);
      if (yr > n) continue;
      y = static_cast<std::int64_t>(yr);
      v = v * (u - p3) * lambda_r;
    }

    const auto k = static_cast<double>(std::llabs(y - m));
    if (k <= 20.0 || k >= nrq / 2.0 - 1.0) {
      // Explicit ratio f(y) / f(m) by recursion.
      const double s = r / q;
      const double aa = s * (n + 1.0);
      double f = 1.0;
      if (m < y) {
        for (std::int64_t i = m + 1; i <= y; ++i) f *= (aa / static_cast<double>(i) - s);
      } else if (m > y) {
        for (std::int64_t i = y + 1; i <= m; ++i) f /= (aa / static_cast<double>(i) - s);
      }
      if (v <= f) return y;
      continue;
    }

    // Squeeze on log f(y) / f(m), then the Stirling-corrected exact bound.
    const double rho = (k / nrq) * ((k * (k / 3.0 + 0.625) + 0.1666666666666667) / nrq + 0.5);
    const double t = -k * k / (2.0 * nrq);
    const double log_v = std::log(v);
    if (log_v < t - rho) return y;
    if (log_v > t + rho) continue;

    const auto yd = static_cast<double>(y);
    const double x1 = yd + 1.0;
    const double f1 = md + 1.0;
    const double z = n + 1.0 - md;
    const double w = n - yd + 1.0;
    const double bound = xm * std::log(f1 / x1) + (n - md + 0.5) * std::log(z / w) +
                         (yd - md) * std::log(w * r / (x1 * q)) + stirling_tail(f1) +
                         stirling_tail(z) + stirling_tail(x1) + stirling_tail(w);
    if (log_v <= bound) return y;
  }
}

}  // namespace

std::int64_t sample_binomial(RngStream& rng, std::int64_t trials, double p) {
  if (trials <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  const bool flip = p > 0.5;
  const double r = flip ? 1.0 - p : p;
  const std::int64_t y = static_cast<double>(trials) * r < 30.0 ? binomial_inversion(rng, trials, r)
                                                                : binomial_btpe(rng, trials, r);
  return flip ? trials - y : y;
}

std::int64_t sample_geometric(RngStream& rng, double p) {
  if (p >= 1.0) return 0;
  const double skip = std::floor(std::log(rng.uniform_open()) / std::log1p(-p));
  return skip >= 9.0e18 ? std::int64_t{9'000'000'000'000'000'000} : static_cast<std::int64_t>(skip);
}

}  // namespace critwin
