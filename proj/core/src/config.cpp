#include "critwin/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "critwin/error.hpp"

namespace critwin {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for double is available in libstdc++ 11.
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) {
      throw ConfigError(fmt::format("config: cannot parse {} = '{}' as a real number", key, value));
    }
  } else {
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ConfigError(fmt::format("config: cannot parse {} = '{}' as an integer", key, value));
    }
  }
  return out;
}

double floor_nudged(double v) {
  // Guards against cbrt/pow results landing one ulp under an exact integer.
  return std::floor(v + 1e-12 * std::max(1.0, std::abs(v)));
}

}  // namespace

std::int64_t derive_k(const RunConfig& config) {
  const auto n = static_cast<double>(config.n);
  double raw = 0.0;
  if (const auto* g = std::get_if<GeneralWindow>(&config.window)) {
    raw = g->epsilon * g->epsilon * n * config.x;
  } else {
    raw = std::cbrt(n) * config.x;
  }
  const double k = floor_nudged(raw);
  if (k < 1.0) {
    throw ConfigError(fmt::format(
        "config: derived k = 0 (n = {}, x = {}, {}); increase x or n", config.n, config.x,
        describe(config.window)));
  }
  if (k > n) {
    throw ConfigError(fmt::format("config: derived k = {} exceeds n = {}; decrease x", k, config.n));
  }
  return static_cast<std::int64_t>(k);
}

void validate(const RunConfig& config) {
  if (config.n < 2) throw ConfigError(fmt::format("config: n must be >= 2 (got {})", config.n));
  if (!(config.x > 0.0)) throw ConfigError(fmt::format("config: x must be positive (got {})", config.x));
  if (config.replicates < 1) {
    throw ConfigError(fmt::format("config: replicates must be >= 1 (got {})", config.replicates));
  }
  (void)edge_probability(config.window, config.n);
  (void)derive_k(config);
}

RunConfig parse_config_text(std::string_view text, RunConfig base) {
  std::map<std::string, std::string, std::less<>> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("config line {}: expected 'key = value'", line_no));
    }
    const auto key = std::string(trim(line.substr(0, eq)));
    const auto value = std::string(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw ConfigError(fmt::format("config line {}: empty key or value", line_no));
    }
    if (!entries.emplace(key, value).second) {
      throw ConfigError(fmt::format("config line {}: duplicate key '{}'", line_no, key));
    }
  }

  double lambda = window_lambda(base.window);
  std::optional<double> epsilon = window_epsilon(base.window);
  bool general = is_general(base.window);
  for (const auto& [key, value] : entries) {
    if (key == "n") {
      base.n = parse_number<std::int64_t>(key, value);
    } else if (key == "x") {
      base.x = parse_number<double>(key, value);
    } else if (key == "lambda") {
      lambda = parse_number<double>(key, value);
    } else if (key == "epsilon") {
      epsilon = parse_number<double>(key, value);
    } else if (key == "window") {
      if (value == "aldous") {
        general = false;
      } else if (value == "general") {
        general = true;
      } else {
        throw ConfigError(fmt::format("config: window must be 'aldous' or 'general' (got '{}')", value));
      }
    } else if (key == "seed") {
      base.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "replicates") {
      base.replicates = parse_number<std::int64_t>(key, value);
    } else {
      throw ConfigError(fmt::format("config: unknown key '{}'", key));
    }
  }
  if (general) {
    if (!epsilon) throw ConfigError("config: window = general requires epsilon");
    base.window = GeneralWindow{lambda, *epsilon};
  } else {
    base.window = AldousWindow{lambda};
  }
  return base;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("config: cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), std::move(base));
}

std::string format_config(const RunConfig& config) {
  std::string out = fmt::format("n = {}\nx = {}\nlambda = {}\n", config.n, config.x,
                                window_lambda(config.window));
  if (const auto eps = window_epsilon(config.window)) {
    out += fmt::format("window = general\nepsilon = {}\n", *eps);
  } else {
    out += "window = aldous\n";
  }
  out += fmt::format("seed = {}\nreplicates = {}\n", config.seed, config.replicates);
  return out;
}

}  // namespace critwin
