#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "critwin/window.hpp"

namespace critwin {

struct RunConfig {
  std::int64_t n = 1000;
  double x = 1.0;
  CriticalWindow window = AldousWindow{};
  std::uint64_t seed = 0;
  std::int64_t replicates = 1;
};

/// k = floor(n^{1/3} x) (Aldous) or floor(epsilon^2 n x) (general).
/// Throws ConfigError when k would be 0 or exceed n.
std::int64_t derive_k(const RunConfig& config);

/// Checks n, x, replicates, the window at n and the derived k.
void validate(const RunConfig& config);

/// Parses `key = value` lines (n, x, lambda, window, epsilon, seed,
/// replicates). Blank lines and `#` comments are skipped; unknown keys,
/// duplicate keys and unparsable values raise ConfigError.
RunConfig parse_config_text(std::string_view text, RunConfig base = {});
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Inverse of parse_config_text for the resolved values.
std::string format_config(const RunConfig& config);

}  // namespace critwin
