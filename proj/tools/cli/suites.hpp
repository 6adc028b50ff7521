#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "critwin/analysis.hpp"

namespace critwin::cli {

inline constexpr std::uint64_t kDefaultSeed = 20261017;

/// Pinned suite parameters can be overridden for exploratory runs.
struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  std::optional<std::int64_t> n;
  std::optional<double> x;
  std::optional<double> lambda;
  std::optional<std::int64_t> replicates;
  std::optional<double> dt;
};

struct SuiteInfo {
  std::string name;
  int criterion = 0;
  bool gating = true;
  std::string summary;
};

const std::vector<SuiteInfo>& suites();
const SuiteInfo* find_suite(std::string_view name);

/// Throws std::invalid_argument for an unknown suite name.
ComparisonReport run_suite(std::string_view name, const SuiteOptions& options);

ComparisonReport verify_kernel(const SuiteOptions& options);
ComparisonReport verify_identities(const SuiteOptions& options);
ComparisonReport verify_moments(const SuiteOptions& options);
ComparisonReport verify_zlimit(const SuiteOptions& options);
ComparisonReport verify_lamperti(const SuiteOptions& options);
ComparisonReport verify_hitting(const SuiteOptions& options);
ComparisonReport verify_cousin(const SuiteOptions& options);
ComparisonReport verify_klimit(const SuiteOptions& options);
ComparisonReport verify_deterministic(const SuiteOptions& options);
ComparisonReport verify_selfsim(const SuiteOptions& options);
ComparisonReport verify_components(const SuiteOptions& options);
ComparisonReport verify_conjecture(const SuiteOptions& options);

}  // namespace critwin::cli
