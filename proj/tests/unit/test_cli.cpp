#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace critwin::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "critwin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("critwin_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    unsetenv("CW_SEED");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv("CW_SEED");
  }
  std::string out(const std::string& sub = "") const { return (dir_ / sub).string(); }

  static json manifest(const std::string& dir) {
    std::ifstream in(fs::path(dir) / "manifest.json");
    return json::parse(in);
  }

  fs::path dir_;
};

TEST_F(CliTest, SimulateGraphSucceeds) {
  const auto r = invoke({"simulate-graph", "--n", "200", "--x", "1", "--replicates", "2", "--walk", "--out", out()});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  for (const char* f : {"trace_r0.csv", "cousin_r1.csv", "walk_r1.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["infected_total"].size(), 2u);
  const auto m = manifest(out());
  EXPECT_EQ(m["command"], "simulate-graph");
  EXPECT_EQ(m["outputs"].size(), 6u);
  EXPECT_EQ(m["outputs"][0]["sha256"].get<std::string>().size(), 64u);
}

TEST_F(CliTest, UnwritableOutputIsIoError) {
  const auto r = invoke({"simulate-chain", "--n", "100", "--out", "/proc/critwin_forbidden"});
  EXPECT_EQ(r.code, kIoError);
}

TEST_F(CliTest, InvalidArgumentsAreUsageErrors) {
  EXPECT_EQ(invoke({"simulate-chain", "--n", "100", "--replicates", "0", "--out", out()}).code, kUsageError);
  EXPECT_EQ(invoke({"simulate-chain", "--n", "abc", "--out", out()}).code, kUsageError);
  EXPECT_EQ(invoke({"no-such-command"}).code, kUsageError);
  EXPECT_EQ(invoke({"simulate-chain", "--window", "aldous", "--epsilon", "0.1", "--out", out()}).code, kUsageError);
  EXPECT_EQ(invoke({"continuum", "bogus", "--out", out()}).code, kUsageError);
  EXPECT_EQ(invoke({"continuum", "sde", "--dt", "0", "--out", out()}).code, kUsageError);
  EXPECT_EQ(invoke({"continuum", "sde", "--dt", "-1e-3", "--out", out()}).code, kUsageError);
  EXPECT_EQ(invoke({"verify", "bogus"}).code, kUsageError);
  EXPECT_EQ(invoke({"sweep", "--n-list", "100", "--out", out()}).code, kUsageError);
}

TEST_F(CliTest, HelpIsSuccess) {
  EXPECT_EQ(invoke({"--help"}).code, kSuccess);
}

TEST_F(CliTest, ContinuumDeterministicContents) {
  const auto r = invoke({"continuum", "deterministic", "--x", "0.5", "--lambda", "0", "--dt", "0.5",
                         "--t-max", "2", "--out", out()});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  std::ifstream in(dir_ / "deterministic.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,f,c,z,K");
  std::string line;
  std::string last;
  while (std::getline(in, line)) last = line;
  std::istringstream row(last);
  std::string field;
  std::vector<double> values;
  while (std::getline(row, field, ',')) values.push_back(std::stod(field));
  ASSERT_EQ(values.size(), 5u);
  EXPECT_DOUBLE_EQ(values[0], 2.0);
  EXPECT_NEAR(values[2], 0.761594, 1e-6);
}

TEST_F(CliTest, ContinuumStochasticKinds) {
  for (const char* kind : {"sde", "lamperti", "parabolic", "hitting"}) {
    const auto r = invoke({"continuum", kind, "--x", "1", "--dt", "1e-3", "--t-max", "1",
                           "--replicates", "3", "--out", out(kind)});
    EXPECT_EQ(r.code, kSuccess) << kind << ": " << r.err;
    EXPECT_TRUE(fs::exists(dir_ / kind / "manifest.json")) << kind;
  }
}

TEST_F(CliTest, VerifyFastSuites) {
  for (const char* suite : {"identities", "kernel", "deterministic"}) {
    const auto r = invoke({"verify", suite});
    EXPECT_EQ(r.code, kSuccess) << suite << ": " << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["pass"].get<bool>()) << suite;
    EXPECT_NE(r.err.find("PASS"), std::string::npos);
  }
}

TEST_F(CliTest, VerifyWritesReportWithOut) {
  const auto r = invoke({"verify", "kernel", "--out", out()});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "report.json"));
  EXPECT_TRUE(fs::exists(dir_ / "manifest.json"));
}

TEST_F(CliTest, ReplayGivesIdenticalDigests) {
  const std::vector<std::string> base = {"simulate-chain", "--n", "1000", "--x", "1", "--replicates", "4", "--seed", "77"};
  auto a = base;
  a.insert(a.end(), {"--out", out("a"), "--threads", "1"});
  auto b = base;
  b.insert(b.end(), {"--out", out("b"), "--threads", "3"});
  ASSERT_EQ(invoke(a).code, kSuccess);
  ASSERT_EQ(invoke(b).code, kSuccess);
  EXPECT_EQ(manifest(out("a"))["outputs"], manifest(out("b"))["outputs"]);

  auto c = base;
  c.back() = "78";
  c.insert(c.end(), {"--out", out("c")});
  ASSERT_EQ(invoke(c).code, kSuccess);
  EXPECT_NE(manifest(out("a"))["outputs"], manifest(out("c"))["outputs"]);
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
  setenv("CW_SEED", "77", 1);
  ASSERT_EQ(invoke({"simulate-chain", "--n", "1000", "--replicates", "2", "--out", out("env")}).code, kSuccess);
  unsetenv("CW_SEED");
  ASSERT_EQ(invoke({"simulate-chain", "--n", "1000", "--replicates", "2", "--seed", "77", "--out", out("flag")}).code,
            kSuccess);
  EXPECT_EQ(manifest(out("env"))["outputs"], manifest(out("flag"))["outputs"]);
  EXPECT_EQ(manifest(out("env"))["config"]["seed"], 77);

  setenv("CW_SEED", "not-a-number", 1);
  EXPECT_EQ(invoke({"simulate-chain", "--n", "1000", "--out", out("bad")}).code, kUsageError);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  fs::create_directories(dir_);
  const auto cfg = dir_ / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "n = 500\nx = 2\nseed = 5\nreplicates = 1\n";
  }
  const auto r = invoke({"simulate-chain", "--config", cfg.string(), "--seed", "6", "--out", out("cfg")});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const auto config = json::parse(r.out)["config"];
  EXPECT_EQ(config["n"], 500);
  EXPECT_EQ(config["seed"], 6);
  EXPECT_EQ(invoke({"simulate-chain", "--config", (dir_ / "missing.cfg").string(), "--out", out("x")}).code,
            kUsageError);
}

TEST_F(CliTest, SweepWritesOutputs) {
  const auto r = invoke({"sweep", "--n-list", "1000,8000", "--r", "1", "--T", "1", "--grid-density", "16",
                         "--out", out()});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "sweep.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "sweep_summary.json"));
}

}  // namespace
}  // namespace critwin::cli
