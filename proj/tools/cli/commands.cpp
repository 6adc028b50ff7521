#include "cli/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "cli/manifest.hpp"
#include "cli/suites.hpp"
#include "critwin/chain.hpp"
#include "critwin/config.hpp"
#include "critwin/continuum.hpp"
#include "critwin/csv.hpp"
#include "critwin/error.hpp"
#include "critwin/graph.hpp"
#include "critwin/moments.hpp"
#include "critwin/parallel.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace critwin::cli {
namespace {

struct Flags {
  std::optional<std::string> config_path;
  std::optional<std::int64_t> n;
  std::optional<double> x;
  std::optional<double> lambda;
  std::optional<double> epsilon;
  std::optional<std::string> window;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> replicates;
  std::optional<double> dt;
  std::optional<double> t_max;
  unsigned threads = 1;
  std::string out = "critwin_out";
};

void add_common(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config_path, "key = value configuration file");
  cmd.add_option("--n", f.n, "population / vertex count");
  cmd.add_option("--x", f.x, "initial-mass parameter");
  cmd.add_option("--lambda", f.lambda, "window location");
  cmd.add_option("--epsilon", f.epsilon, "general-window epsilon");
  cmd.add_option("--window", f.window, "aldous or general")->check(CLI::IsMember({"aldous", "general"}));
  cmd.add_option("--seed", f.seed, "64-bit seed (falls back to CW_SEED)");
  cmd.add_option("--replicates", f.replicates, "number of replicates");
  cmd.add_option("--dt", f.dt, "time step");
  cmd.add_option("--t-max", f.t_max, "time horizon");
  cmd.add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd.add_option("--out", f.out, "output directory");
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  const auto value = std::stoull(text, &used, 0);
  if (used != text.size()) throw std::invalid_argument("trailing characters");
  return value;
}

RunConfig resolve_config(const Flags& f) {
  RunConfig base;
  if (const char* env = std::getenv("CW_SEED"); env != nullptr && *env != '\0') {
    try {
      base.seed = parse_seed(env);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("CW_SEED is not an unsigned integer: '{}'", env));
    }
  }
  RunConfig c = f.config_path ? load_config_file(*f.config_path, base) : base;
  if (f.n) c.n = *f.n;
  if (f.x) c.x = *f.x;
  if (f.seed) c.seed = *f.seed;
  if (f.replicates) c.replicates = *f.replicates;
  const bool want_general = f.window ? *f.window == "general" : is_general(c.window);
  const double lambda = f.lambda.value_or(window_lambda(c.window));
  if (want_general) {
    const auto eps = f.epsilon ? f.epsilon : window_epsilon(c.window);
    if (!eps) throw ConfigError("the general window needs --epsilon");
    c.window = GeneralWindow{lambda, *eps};
  } else {
    if (f.epsilon) throw ConfigError("--epsilon applies only to --window general");
    c.window = AldousWindow{lambda};
  }
  return c;
}

fs::path prepare_out_dir(const std::string& dir) {
  const fs::path path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec || !fs::is_directory(path)) {
    throw IoError(fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
  }
  const auto probe = path / ".critwin_write_probe";
  {
    std::ofstream test(probe);
    if (!test) throw IoError(fmt::format("output directory '{}' is not writable", dir));
  }
  fs::remove(probe, ec);
  return path;
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  writer(out);
  out.flush();
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

class Stopwatch {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

RunManifest make_manifest(std::string command, const RunConfig& config) {
  RunManifest m;
  m.command = std::move(command);
  m.config = config;
  return m;
}

json config_json(const RunConfig& c) {
  return {{"n", c.n},
          {"x", c.x},
          {"window", is_general(c.window) ? "general" : "aldous"},
          {"lambda", window_lambda(c.window)},
          {"epsilon", window_epsilon(c.window) ? json(*window_epsilon(c.window)) : json(nullptr)},
          {"seed", c.seed},
          {"replicates", c.replicates}};
}

int cmd_simulate_graph(const Flags& f, bool with_walk, std::ostream& out) {
  Stopwatch clock;
  const RunConfig c = resolve_config(f);
  validate(c);
  const auto dir = prepare_out_dir(f.out);
  const auto k = derive_k(c);
  const double p = edge_probability(c.window, c.n);
  const auto reps = static_cast<std::size_t>(c.replicates);
  std::vector<std::int64_t> totals(reps);
  std::vector<std::int64_t> heights(reps);
  parallel_for(reps, f.threads, [&](std::size_t i) {
    RngStream rng = make_stream(c.seed, i, "graph");
    const auto graph = sample_graph(c.n, p, rng);
    RngStream root_rng = rng.fork("roots");
    const auto expl = explore(graph, k, root_rng);
    const auto series = cousin_series(expl);
    totals[i] = infected_total(expl);
    heights[i] = expl.max_height();
    write_file(dir / fmt::format("trace_r{}.csv", i), [&](std::ostream& os) { write_trace_csv(os, series.Z, series.C); });
    write_file(dir / fmt::format("cousin_r{}.csv", i), [&](std::ostream& os) { write_cousin_csv(os, series); });
    if (with_walk) {
      RngStream walk_rng = rng.fork("walk");
      const auto walk = breadth_first_walk(graph, walk_rng);
      write_file(dir / fmt::format("walk_r{}.csv", i), [&](std::ostream& os) { write_walk_csv(os, walk); });
    }
  });
  auto manifest = make_manifest("simulate-graph", c);
  manifest.parameters = {{"k", std::to_string(k)}, {"walk", with_walk ? "true" : "false"}};
  for (std::size_t i = 0; i < reps; ++i) {
    manifest.outputs.emplace_back(fmt::format("trace_r{}.csv", i));
    manifest.outputs.emplace_back(fmt::format("cousin_r{}.csv", i));
    if (with_walk) manifest.outputs.emplace_back(fmt::format("walk_r{}.csv", i));
  }
  manifest.duration_seconds = clock.seconds();
  write_manifest(dir, manifest);
  out << json{{"command", "simulate-graph"}, {"config", config_json(c)}, {"k", k},
              {"infected_total", totals}, {"max_height", heights}}.dump()
      << '\n';
  return kSuccess;
}

int cmd_simulate_chain(const Flags& f, std::optional<std::int64_t> max_steps, std::ostream& out) {
  Stopwatch clock;
  const RunConfig c = resolve_config(f);
  validate(c);
  if (max_steps && *max_steps < 1) throw ConfigError("--max-steps must be >= 1");
  const auto dir = prepare_out_dir(f.out);
  const auto k = derive_k(c);
  const auto steps = max_steps.value_or(default_max_steps(c.window, c.n));
  const auto reps = static_cast<std::size_t>(c.replicates);
  std::vector<std::int64_t> totals(reps);
  std::vector<char> truncated_flags(reps, 0);
  parallel_for(reps, f.threads, [&](std::size_t i) {
    RngStream rng = make_stream(c.seed, i, "chain");
    const auto trace = simulate_trace(c.n, k, c.window, steps, rng);
    totals[i] = trace.total_infected();
    truncated_flags[i] = trace.truncated ? 1 : 0;
    write_file(dir / fmt::format("trace_r{}.csv", i), [&](std::ostream& os) { write_trace_csv(os, trace); });
  });
  auto manifest = make_manifest("simulate-chain", c);
  manifest.parameters = {{"k", std::to_string(k)}, {"max_steps", std::to_string(steps)}};
  for (std::size_t i = 0; i < reps; ++i) manifest.outputs.emplace_back(fmt::format("trace_r{}.csv", i));
  manifest.duration_seconds = clock.seconds();
  write_manifest(dir, manifest);
  std::vector<bool> flags(truncated_flags.begin(), truncated_flags.end());
  out << json{{"command", "simulate-chain"}, {"config", config_json(c)}, {"k", k}, {"max_steps", steps},
              {"infected_total", totals}, {"truncated", flags}}.dump()
      << '\n';
  return kSuccess;
}

struct ContinuumFlags {
  std::string kind;
  std::int64_t stride = 100;
  bool no_bridge = false;
};

int cmd_continuum(const Flags& f, const ContinuumFlags& cf, std::ostream& out) {
  Stopwatch clock;
  static const std::vector<std::string> kinds = {"sde", "parabolic", "lamperti", "hitting", "deterministic"};
  if (std::find(kinds.begin(), kinds.end(), cf.kind) == kinds.end()) {
    throw ConfigError(fmt::format("unknown continuum kind '{}'", cf.kind));
  }
  const RunConfig c = resolve_config(f);
  const double x = c.x;
  const double lambda = window_lambda(c.window);
  const double dt = f.dt.value_or(cf.kind == "deterministic" ? 0.01 : 1e-4);
  const double t_max = f.t_max.value_or(5.0);
  if (!(dt > 0.0)) throw ConfigError(fmt::format("--dt must be positive, got {}", dt));
  if (!(t_max >= dt)) throw ConfigError("--t-max must be at least --dt");
  if (!(x > 0.0)) throw ConfigError("--x must be positive");
  if (c.replicates < 1) throw ConfigError("--replicates must be >= 1");
  if (cf.stride < 1) throw ConfigError("--stride must be >= 1");
  const auto dir = prepare_out_dir(f.out);
  const auto reps = static_cast<std::size_t>(c.replicates);
  auto manifest = make_manifest("continuum " + cf.kind, c);
  manifest.parameters = {{"kind", cf.kind}, {"dt", fmt::format("{:.17g}", dt)},
                         {"t_max", fmt::format("{:.17g}", t_max)}, {"stride", std::to_string(cf.stride)}};
  json summary{{"command", "continuum"}, {"kind", cf.kind}, {"x", x}, {"lambda", lambda},
               {"dt", dt}, {"t_max", t_max}, {"seed", c.seed}};

  if (cf.kind == "deterministic") {
    write_file(dir / "deterministic.csv", [&](std::ostream& os) { write_deterministic_csv(os, x, lambda, dt, t_max); });
    manifest.outputs.emplace_back("deterministic.csv");
    summary["t0"] = deterministic_t0(x, lambda);
  } else if (cf.kind == "hitting") {
    std::vector<HittingSample> samples(reps);
    parallel_for(reps, f.threads, [&](std::size_t i) {
      RngStream rng = make_stream(c.seed, i, "hitting");
      samples[i] = sample_hitting_time(x, lambda, dt, t_max, rng, !cf.no_bridge);
    });
    write_file(dir / "hitting.csv", [&](std::ostream& os) { write_hitting_csv(os, samples); });
    manifest.outputs.emplace_back("hitting.csv");
    std::vector<double> T;
    std::int64_t truncated = 0;
    for (const auto& s : samples) {
      T.push_back(s.T);
      truncated += s.truncated ? 1 : 0;
    }
    const auto stats = summarize(T);
    summary["bridge"] = !cf.no_bridge;
    summary["mean_T"] = stats.mean;
    summary["stderr_T"] = stats.stderr_mean();
    summary["truncated"] = truncated;
  } else {
    std::vector<double> terminal(reps);
    parallel_for(reps, f.threads, [&](std::size_t i) {
      RngStream rng = make_stream(c.seed, i, cf.kind);
      const auto file = dir / fmt::format("{}_r{}.csv", cf.kind, i);
      if (cf.kind == "parabolic") {
        const auto path = sample_parabolic_bm(lambda, 0.0, dt, t_max, rng);
        terminal[i] = path.values.back();
        write_file(file, [&](std::ostream& os) { write_parabolic_csv(os, path); });
      } else {
        const auto path = cf.kind == "sde" ? simulate_sde(x, lambda, dt, t_max, rng, cf.stride)
                                           : lamperti_route(x, lambda, dt, t_max, rng, cf.stride);
        terminal[i] = path.terminal_C;
        write_file(file, [&](std::ostream& os) { write_path_csv(os, path); });
      }
    });
    for (std::size_t i = 0; i < reps; ++i) manifest.outputs.emplace_back(fmt::format("{}_r{}.csv", cf.kind, i));
    summary[cf.kind == "parabolic" ? "mean_terminal_X" : "mean_terminal_C"] = summarize(terminal).mean;
  }
  summary["replicates"] = c.replicates;
  manifest.duration_seconds = clock.seconds();
  write_manifest(dir, manifest);
  out << summary.dump() << '\n';
  return kSuccess;
}

int cmd_verify(const Flags& f, const std::string& suite, bool write_out, std::ostream& out,
               std::ostream& err) {
  Stopwatch clock;
  const SuiteInfo* info = find_suite(suite);
  if (info == nullptr) throw ConfigError(fmt::format("unknown suite '{}'", suite));
  SuiteOptions options;
  if (const char* env = std::getenv("CW_SEED"); env != nullptr && *env != '\0') {
    try {
      options.seed = parse_seed(env);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("CW_SEED is not an unsigned integer: '{}'", env));
    }
  }
  if (f.config_path) {
    const auto c = load_config_file(*f.config_path, RunConfig{.seed = options.seed});
    options.seed = c.seed;
    options.n = c.n;
    options.x = c.x;
    options.lambda = window_lambda(c.window);
    options.replicates = c.replicates;
  }
  if (f.seed) options.seed = *f.seed;
  if (f.n) options.n = *f.n;
  if (f.x) options.x = *f.x;
  if (f.lambda) options.lambda = *f.lambda;
  if (f.replicates) options.replicates = *f.replicates;
  if (f.dt) {
    if (!(*f.dt > 0.0)) throw ConfigError("--dt must be positive");
    options.dt = *f.dt;
  }
  options.threads = f.threads;
  const auto report = run_suite(suite, options);
  const auto text = report_json(report);
  if (write_out) {
    const auto dir = prepare_out_dir(f.out);
    write_file(dir / "report.json", [&](std::ostream& os) { os << text << '\n'; });
    auto manifest = make_manifest("verify " + suite, RunConfig{});
    manifest.config.seed = options.seed;
    manifest.parameters = {{"suite", suite}};
    manifest.outputs.emplace_back("report.json");
    manifest.duration_seconds = clock.seconds();
    write_manifest(dir, manifest);
  }
  out << text << '\n';
  err << fmt::format("[{}] criterion {} {}: statistic {:.6g} tolerance {:.6g}\n", suite, info->criterion,
                     report.pass ? "PASS" : (info->gating ? "FAIL" : "INFO"), report.statistic, report.tolerance);
  if (!info->gating) return kSuccess;
  return report.pass ? kSuccess : kVerificationFailed;
}

struct SweepFlags {
  std::string n_list = "1000,10000,100000,1000000";
  double r = 1.0;
  double T = 1.0;
  std::optional<double> epsilon_exponent;
  int grid_density = 64;
};

int cmd_sweep(const Flags& f, const SweepFlags& sf, std::ostream& out) {
  Stopwatch clock;
  std::vector<std::int64_t> n_list;
  std::stringstream ss(sf.n_list);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      const auto v = std::stoll(item, &used);
      if (used != item.size() || v < 2) throw std::invalid_argument("bad");
      n_list.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("--n-list entry '{}' is not an integer >= 2", item));
    }
  }
  if (n_list.size() < 2) throw ConfigError("--n-list needs at least two sizes");
  if (sf.grid_density < 8) throw ConfigError("--grid-density must be >= 8");
  const double lambda = f.lambda.value_or(1.0);
  const auto dir = prepare_out_dir(f.out);
  const auto sweep = bound_sweep(n_list, sf.r, sf.T, SweepFamily{lambda, sf.epsilon_exponent}, sf.grid_density);
  write_file(dir / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, sweep); });
  const auto summary = sweep_summary_json(sweep);
  write_file(dir / "sweep_summary.json", [&](std::ostream& os) { os << summary << '\n'; });
  auto manifest = make_manifest("sweep", RunConfig{});
  manifest.parameters = {{"n_list", sf.n_list}, {"lambda", fmt::format("{:.17g}", lambda)},
                         {"r", fmt::format("{:.17g}", sf.r)}, {"T", fmt::format("{:.17g}", sf.T)},
                         {"grid_density", std::to_string(sf.grid_density)}};
  manifest.outputs = {"sweep.csv", "sweep_summary.json"};
  manifest.duration_seconds = clock.seconds();
  write_manifest(dir, manifest);
  out << summary << '\n';
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Critical-window random graph and epidemic simulator", "critwin"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Flags graph_flags;
  bool with_walk = false;
  auto* graph_cmd = app.add_subcommand("simulate-graph", "sample G(n,p), explore from k roots, write CSVs");
  add_common(*graph_cmd, graph_flags);
  graph_cmd->add_flag("--walk", with_walk, "also write the breadth-first walk");

  Flags chain_flags;
  std::optional<std::int64_t> max_steps;
  auto* chain_cmd = app.add_subcommand("simulate-chain", "simulate the Reed-Frost height-profile chain");
  add_common(*chain_cmd, chain_flags);
  chain_cmd->add_option("--max-steps", max_steps, "generation cap");

  Flags cont_flags;
  ContinuumFlags cont;
  auto* cont_cmd = app.add_subcommand("continuum", "simulate a continuum limit object");
  add_common(*cont_cmd, cont_flags);
  cont_cmd->add_option("kind", cont.kind, "sde|parabolic|lamperti|hitting|deterministic")->required();
  cont_cmd->add_option("--stride", cont.stride, "record every stride-th step of path outputs");
  cont_cmd->add_flag("--no-bridge", cont.no_bridge, "grid-only crossing detection for hitting times");

  Flags verify_flags;
  std::string suite;
  auto* verify_cmd = app.add_subcommand("verify", "run one acceptance suite");
  add_common(*verify_cmd, verify_flags);
  verify_cmd->add_option("suite", suite, "suite name")->required();

  Flags sweep_flags;
  SweepFlags sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "moment bound sweep over n");
  add_common(*sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--n-list", sweep.n_list, "comma-separated sizes");
  sweep_cmd->add_option("--r", sweep.r, "box size r");
  sweep_cmd->add_option("--T", sweep.T, "box size T");
  sweep_cmd->add_option("--epsilon-exponent", sweep.epsilon_exponent, "general family epsilon = n^-a");
  sweep_cmd->add_option("--grid-density", sweep.grid_density, "lattice points per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, err, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*graph_cmd) return cmd_simulate_graph(graph_flags, with_walk, out);
    if (*chain_cmd) return cmd_simulate_chain(chain_flags, max_steps, out);
    if (*cont_cmd) return cmd_continuum(cont_flags, cont, out);
    if (*verify_cmd) return cmd_verify(verify_flags, suite, verify_cmd->count("--out") > 0, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep_flags, sweep, out);
  } catch (const IoError& e) {
    err << "critwin: " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << "critwin: " << e.what() << '\n';
    return kIoError;
  } catch (const InsufficientSampleError& e) {
    err << "critwin: " << e.what() << '\n';
    return kVerificationFailed;
  } catch (const std::invalid_argument& e) {
    err << "critwin: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "critwin: " << e.what() << '\n';
    return kIoError;
  }
  return kUsageError;
}

}  // namespace critwin::cli
