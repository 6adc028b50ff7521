#pragma once

#include <ostream>
#include <stdexcept>

namespace critwin::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kIoError = 2, kVerificationFailed = 3 };

/// Output directory or file could not be created or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Entry point shared by the executable and the tests. JSON reports go to
/// `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace critwin::cli
