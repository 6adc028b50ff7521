#include <cmath>

#include <json.hpp>

#include "critwin/analysis.hpp"

namespace critwin {
namespace {

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json delta_json(const MomentDelta& d) {
  return {{"delta", finite_or_null(d.delta)}, {"stderr", finite_or_null(d.stderr_)}};
}

}  // namespace

std::string report_json(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["test_name"] = report.test_name;
  j["statistic"] = finite_or_null(report.statistic);
  j["tolerance"] = finite_or_null(report.tolerance);
  j["n"] = report.n;
  j["N"] = report.sample_a;
  j["seed"] = report.seed;
  j["pass"] = report.pass;
  if (report.sample_b != 0) j["N_b"] = report.sample_b;
  if (report.noise_floor != 0.0) j["noise_floor"] = report.noise_floor;
  if (report.discretization_allowance != 0.0) {
    j["discretization_allowance"] = report.discretization_allowance;
  }
  if (report.mean_delta) j["mean_delta"] = delta_json(*report.mean_delta);
  if (report.variance_delta) j["variance_delta"] = delta_json(*report.variance_delta);
  if (report.sup_distance) j["sup_distance"] = finite_or_null(*report.sup_distance);
  if (report.slope) j["slope"] = finite_or_null(*report.slope);
  if (report.slope_stderr) j["slope_stderr"] = finite_or_null(*report.slope_stderr);
  if (!report.extras.empty()) {
    nlohmann::ordered_json extras = nlohmann::ordered_json::object();
    for (const auto& [key, value] : report.extras) extras[key] = finite_or_null(value);
    j["extras"] = std::move(extras);
  }
  return j.dump();
}

}  // namespace critwin
