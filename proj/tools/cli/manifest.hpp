#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "critwin/config.hpp"

namespace critwin::cli {

inline constexpr const char* kToolVersion = "critwin 0.1.0";

/// Lowercase hex SHA-256 of a file's bytes. Throws std::runtime_error when
/// the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  RunConfig config;
  std::vector<std::pair<std::string, std::string>> parameters;  ///< extra resolved settings
  double duration_seconds = 0.0;
  std::vector<std::filesystem::path> outputs;  ///< relative to the output directory
};

/// Writes manifest.json into `out_dir`, digesting every listed output.
void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest);

}  // namespace critwin::cli
