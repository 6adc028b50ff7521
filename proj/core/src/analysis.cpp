#include "critwin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace critwin {

SeriesKind series_kind(Scaling scaling) {
  switch (scaling) {
    case Scaling::AldousProfile:
    case Scaling::GeneralProfile:
      return SeriesKind::HeightProfile;
    case Scaling::AldousCousin:
    case Scaling::GeneralCousin:
      return SeriesKind::Cousin;
    case Scaling::AldousCumulative:
    case Scaling::GeneralCumulative:
      return SeriesKind::Cumulative;
    case Scaling::AldousWalk:
    case Scaling::GeneralWalk:
      return SeriesKind::Walk;
  }
  throw std::logic_error("unreachable scaling");
}

bool is_general(Scaling scaling) {
  switch (scaling) {
    case Scaling::GeneralProfile:
    case Scaling::GeneralCousin:
    case Scaling::GeneralCumulative:
    case Scaling::GeneralWalk:
      return true;
    default:
      return false;
  }
}

std::string to_string(Scaling scaling) {
  switch (scaling) {
    case Scaling::AldousProfile: return "aldous-profile";
    case Scaling::AldousCousin: return "aldous-cousin";
    case Scaling::AldousCumulative: return "aldous-cumulative";
    case Scaling::AldousWalk: return "aldous-walk";
    case Scaling::GeneralProfile: return "general-profile";
    case Scaling::GeneralCousin: return "general-cousin";
    case Scaling::GeneralCumulative: return "general-cumulative";
    case Scaling::GeneralWalk: return "general-walk";
  }
  return "unknown";
}

ScaleFactors scale_factors(Scaling scaling, std::int64_t n, std::optional<double> epsilon) {
  if (n < 1) throw std::invalid_argument("scale_factors: n must be positive");
  const auto nd = static_cast<double>(n);
  const double n13 = std::cbrt(nd);
  const double n23 = n13 * n13;
  if (is_general(scaling) && !(epsilon && *epsilon > 0.0)) {
    throw std::invalid_argument(
        fmt::format("rescale: {} needs a positive epsilon", to_string(scaling)));
  }
  const double eps = epsilon.value_or(0.0);
  const double theta = eps * n13;
  switch (scaling) {
    case Scaling::AldousProfile: return {1.0 / n13, 1.0 / n13};
    case Scaling::AldousCousin: return {1.0 / n13, 1.0 / n23};
    case Scaling::AldousCumulative: return {1.0 / nd, 1.0 / n23};
    case Scaling::AldousWalk: return {1.0 / n13, 1.0 / n23};
    case Scaling::GeneralProfile: return {1.0 / (theta * theta * n13), theta / n13};
    case Scaling::GeneralCousin: return {1.0 / (nd * eps * eps), 1.0 / (nd * eps)};
    case Scaling::GeneralCumulative: return {1.0 / (eps * eps * eps * nd * nd), 1.0 / (nd * eps)};
    case Scaling::GeneralWalk: return {1.0 / (theta * theta * n13), 1.0 / (n23 * theta)};
  }
  throw std::logic_error("unreachable scaling");
}

double RescaledPath::at(double time) const {
  if (t.empty() || time < t.front()) return zero_tail ? 0.0 : (y.empty() ? 0.0 : y.front());
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const auto idx = static_cast<std::size_t>(it - t.begin()) - 1;
  if (idx + 1 == t.size() && zero_tail && time >= t.back() + factors.time) return 0.0;
  return y[idx];
}

RescaledPath rescale(const IntegerSeries& series, Scaling scaling, std::int64_t n,
                     std::optional<double> epsilon) {
  if (series.kind != series_kind(scaling)) {
    throw std::invalid_argument(
        fmt::format("rescale: series kind does not match scaling {}", to_string(scaling)));
  }
  RescaledPath path;
  path.scaling = scaling;
  path.factors = scale_factors(scaling, n, epsilon);
  path.zero_tail = series.kind == SeriesKind::HeightProfile || series.kind == SeriesKind::Cousin;
  path.t.reserve(series.values.size());
  path.y.reserve(series.values.size());
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    path.t.push_back(static_cast<double>(i) * path.factors.time);
    path.y.push_back(static_cast<double>(series.values[i]) * path.factors.space);
  }
  return path;
}

std::vector<std::int64_t> unscale(const RescaledPath& path) {
  std::vector<std::int64_t> out;
  out.reserve(path.y.size());
  for (const double v : path.y) out.push_back(std::llround(v / path.factors.space));
  return out;
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const auto na = static_cast<double>(sa.size());
  const auto nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_noise_floor(std::size_t na, std::size_t nb) {
  const auto a = static_cast<double>(na);
  const auto b = static_cast<double>(nb);
  return 1.36 * std::sqrt((a + b) / (a * b));
}

SampleSummary summarize(std::span<const double> sample) {
  SampleSummary s;
  s.count = sample.size();
  if (sample.empty()) return s;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (const double v : sample) {
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  s.mean = mean;
  s.variance = sample.size() > 1 ? m2 / static_cast<double>(sample.size() - 1) : 0.0;
  return s;
}

double SampleSummary::stderr_mean() const {
  return count > 0 ? std::sqrt(variance / static_cast<double>(count)) : 0.0;
}

ComparisonReport ks_two_sample(std::span<const double> a, std::span<const double> b,
                               double discretization_allowance, std::optional<double> tolerance) {
  ComparisonReport r;
  r.statistic = ks_statistic(a, b);
  r.sample_a = static_cast<std::int64_t>(a.size());
  r.sample_b = static_cast<std::int64_t>(b.size());
  r.noise_floor = ks_noise_floor(a.size(), b.size());
  r.discretization_allowance = discretization_allowance;
  r.tolerance = tolerance.value_or(r.noise_floor + discretization_allowance);
  const auto sa = summarize(a);
  const auto sb = summarize(b);
  r.mean_delta = MomentDelta{sa.mean - sb.mean, std::hypot(sa.stderr_mean(), sb.stderr_mean())};
  // Var of the sample variance ~ 2 sigma^4 / (N - 1) for near-normal data;
  // reported as a rough scale only.
  const auto var_se = [](const SampleSummary& s) {
    return s.count > 1 ? s.variance * std::sqrt(2.0 / static_cast<double>(s.count - 1)) : 0.0;
  };
  r.variance_delta = MomentDelta{sa.variance - sb.variance, std::hypot(var_se(sa), var_se(sb))};
  r.pass = r.statistic <= r.tolerance;
  return r;
}

double sup_distance(const RescaledPath& path, const std::function<double(double)>& reference,
                    double t_lo, double t_hi) {
  double d = 0.0;
  for (std::size_t i = 0; i < path.t.size(); ++i) {
    if (path.t[i] < t_lo || path.t[i] > t_hi) continue;
    d = std::max(d, std::abs(path.y[i] - reference(path.t[i])));
  }
  return d;
}

SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 2) throw std::invalid_argument("fit_loglog_slope: need at least two points");
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& [n, v] : pairs) {
    if (!(n > 0.0)) throw std::invalid_argument("fit_loglog_slope: n must be positive");
    if (!(v > 0.0)) {
      throw std::invalid_argument(
          fmt::format("fit_loglog_slope: non-positive value {} at n = {}", v, n));
    }
    lx.push_back(std::log(n));
    ly.push_back(std::log(v));
  }
  const auto m = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog_slope: all n identical");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ssr += e * e;
  }
  fit.residual = std::sqrt(ssr / m);
  fit.stderr_ = lx.size() > 2 ? std::sqrt(ssr / (m - 2.0) / sxx)
                              : std::numeric_limits<double>::quiet_NaN();
  return fit;
}

}  // namespace critwin
