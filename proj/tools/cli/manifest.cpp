#include "cli/manifest.hpp"

#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

namespace critwin::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  std::string hex;
  for (unsigned i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["tool"] = kToolVersion;
  j["command"] = manifest.command;
  const auto& c = manifest.config;
  j["config"] = {{"n", c.n},
                 {"x", c.x},
                 {"window", is_general(c.window) ? "general" : "aldous"},
                 {"lambda", window_lambda(c.window)},
                 {"epsilon", window_epsilon(c.window) ? nlohmann::ordered_json(*window_epsilon(c.window))
                                                       : nlohmann::ordered_json(nullptr)},
                 {"seed", c.seed},
                 {"replicates", c.replicates}};
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [key, value] : manifest.parameters) params[key] = value;
  j["parameters"] = params;
  j["duration_seconds"] = manifest.duration_seconds;
  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  for (const auto& rel : manifest.outputs) {
    outputs.push_back({{"file", rel.generic_string()}, {"sha256", sha256_file(out_dir / rel)}});
  }
  j["outputs"] = outputs;
  const auto path = out_dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error(fmt::format("write failed for {}", path.string()));
}

}  // namespace critwin::cli
