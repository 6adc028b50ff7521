#pragma once

#include <stdexcept>
#include <string>

namespace critwin {

/// Edge probability for the requested (window, n) falls outside (0, 1).
class InvalidWindowError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Run configuration is malformed or inconsistent (bad keys, k = 0, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Too few usable Monte Carlo samples to form a comparison.
class InsufficientSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace critwin
