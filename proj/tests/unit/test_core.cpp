#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "critwin/config.hpp"
#include "critwin/error.hpp"
#include "critwin/rng.hpp"
#include "critwin/variates.hpp"
#include "critwin/window.hpp"
#include "test_support.hpp"

namespace critwin {
namespace {

TEST(Window, AldousLambdaZeroIsOneOverN) {
  EXPECT_DOUBLE_EQ(edge_probability(AldousWindow{0.0}, 1000), 0.001);
}

TEST(Window, GeneralDirectEvaluation) {
  EXPECT_NEAR(edge_probability(GeneralWindow{1.0, 0.1}, 1000), 0.0011, 1e-15);
}

TEST(Window, NegativeProbabilityRejected) {
  try {
    edge_probability(AldousWindow{-2.0}, 2);
    FAIL() << "expected InvalidWindowError";
  } catch (const InvalidWindowError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("n = 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("-2"), std::string::npos) << msg;
  }
}

TEST(Window, GeneralNeedsPositiveEpsilon) {
  EXPECT_THROW(edge_probability(GeneralWindow{1.0, 0.0}, 100), InvalidWindowError);
  EXPECT_THROW(edge_probability(GeneralWindow{1.0, -0.1}, 100), InvalidWindowError);
  EXPECT_THROW(edge_probability(AldousWindow{0.0}, 1), InvalidWindowError);
}

TEST(Window, AldousStrictlyDecreasingInN) {
  for (const double lambda : {0.0, 0.5, 1.0, 3.0}) {
    double prev = edge_probability(AldousWindow{lambda}, 2 + (lambda > 1.0 ? 30 : 0));
    for (std::int64_t n = 3 + (lambda > 1.0 ? 30 : 0); n < 5000; ++n) {
      const double p = edge_probability(AldousWindow{lambda}, n);
      ASSERT_LT(p, prev) << "lambda " << lambda << " n " << n;
      prev = p;
    }
  }
}

TEST(Window, ThetaAndRegimeCondition) {
  EXPECT_DOUBLE_EQ(window_theta(AldousWindow{1.0}, 1000), 1.0);
  EXPECT_NEAR(window_theta(GeneralWindow{0.0, 0.1}, 1000), 1.0, 1e-12);
  EXPECT_TRUE(regime_condition_met(AldousWindow{0.0}, 10, 1e9));
  EXPECT_TRUE(regime_condition_met(GeneralWindow{0.0, 0.1}, 1000000, 100.0));
  EXPECT_FALSE(regime_condition_met(GeneralWindow{0.0, 0.1}, 1000, 100.0));
}

TEST(DeriveK, AldousExample) {
  EXPECT_EQ(derive_k(RunConfig{.n = 1000, .x = 1.0, .window = AldousWindow{0.0}}), 10);
}

TEST(DeriveK, GeneralExample) {
  EXPECT_EQ(derive_k(RunConfig{.n = 1000, .x = 2.0, .window = GeneralWindow{0.0, 0.1}}), 20);
}

TEST(DeriveK, ZeroIsConfigError) {
  EXPECT_THROW(derive_k(RunConfig{.n = 8, .x = 0.1, .window = AldousWindow{0.0}}), ConfigError);
}

TEST(DeriveK, AtMostNWhenXBelowNTwoThirds) {
  RngStream rng(test::kSeed, 0, "derive-k");
  for (int i = 0; i < 2000; ++i) {
    const auto n = static_cast<std::int64_t>(2 + rng.uniform_index(1000000));
    const double cap = std::pow(static_cast<double>(n), 2.0 / 3.0);
    const double x = cap * rng.uniform_open();
    RunConfig c{.n = n, .x = x, .window = AldousWindow{0.0}};
    try {
      ASSERT_LE(derive_k(c), n);
    } catch (const ConfigError&) {
      ASSERT_LT(std::cbrt(static_cast<double>(n)) * x, 1.0 + 1e-9);
    }
  }
}

TEST(Config, ParsesKeysAndComments) {
  const auto c = parse_config_text(
      "# run\n n = 500\nx=2.5\nwindow = general\nepsilon = 0.2\nlambda = -1\nseed = 99\nreplicates = 4\n");
  EXPECT_EQ(c.n, 500);
  EXPECT_DOUBLE_EQ(c.x, 2.5);
  ASSERT_TRUE(is_general(c.window));
  EXPECT_DOUBLE_EQ(*window_epsilon(c.window), 0.2);
  EXPECT_DOUBLE_EQ(window_lambda(c.window), -1.0);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.replicates, 4);
}

TEST(Config, RejectsUnknownDuplicateAndMalformed) {
  EXPECT_THROW(parse_config_text("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = 10\nn = 11\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n = ten\n"), ConfigError);
  EXPECT_THROW(parse_config_text("n 10\n"), ConfigError);
  EXPECT_THROW(parse_config_text("window = general\n"), ConfigError);
  EXPECT_THROW(parse_config_text("window = other\n"), ConfigError);
}

TEST(Config, FormatRoundTrips) {
  const RunConfig c{.n = 123, .x = 0.75, .window = GeneralWindow{0.5, 0.25}, .seed = 7, .replicates = 3};
  const auto back = parse_config_text(format_config(c));
  EXPECT_EQ(back.n, c.n);
  EXPECT_DOUBLE_EQ(back.x, c.x);
  EXPECT_DOUBLE_EQ(window_lambda(back.window), 0.5);
  EXPECT_DOUBLE_EQ(*window_epsilon(back.window), 0.25);
  EXPECT_EQ(back.seed, 7u);
  EXPECT_EQ(back.replicates, 3);
}

TEST(Config, ValidateCatchesBadValues) {
  EXPECT_THROW(validate(RunConfig{.n = 1000, .replicates = 0}), ConfigError);
  EXPECT_THROW(validate(RunConfig{.n = 1000, .x = -1.0}), ConfigError);
  EXPECT_THROW(validate(RunConfig{.n = 1000, .window = AldousWindow{-20.0}}), InvalidWindowError);
  EXPECT_NO_THROW(validate(RunConfig{}));
}

TEST(Rng, PhiloxKnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Rng, SameTripleSameSequence) {
  auto a = make_stream(42, 0, "graph");
  auto b = make_stream(42, 0, "graph");
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a(), b());
}

TEST(Rng, DistinctReplicateOrLabelDiffers) {
  auto base = make_stream(42, 0, "graph");
  auto rep = make_stream(42, 1, "graph");
  auto label = make_stream(42, 0, "sde");
  int same_rep = 0;
  int same_label = 0;
  for (int i = 0; i < 100; ++i) {
    const auto v = base();
    same_rep += v == rep() ? 1 : 0;
    same_label += v == label() ? 1 : 0;
  }
  EXPECT_EQ(same_rep, 0);
  EXPECT_EQ(same_label, 0);
}

TEST(Rng, ForkIndependentOfDrawCount) {
  auto a = make_stream(5, 2, "x");
  const auto child_before = a.fork("child");
  for (int i = 0; i < 17; ++i) a();
  auto c1 = child_before;
  auto c2 = a.fork("child");
  for (int i = 0; i < 20; ++i) ASSERT_EQ(c1(), c2());
  EXPECT_NE(a.fork("child").key(), a.fork("other").key());
}

TEST(Rng, UniformRangesAndMoments) {
  auto rng = make_stream(test::kSeed, 0, "uniform");
  const int N = 200000;
  double sum = 0.0;
  double sum_normal = 0.0;
  double sum_normal2 = 0.0;
  for (int i = 0; i < N; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.uniform_open();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
    sum += u;
    const double z = rng.normal();
    sum_normal += z;
    sum_normal2 += z * z;
  }
  EXPECT_NEAR(sum / N, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / N));
  EXPECT_NEAR(sum_normal / N, 0.0, 5.0 / std::sqrt(N));
  EXPECT_NEAR(sum_normal2 / N, 1.0, 5.0 * std::sqrt(2.0 / N));
}

TEST(Rng, UniformIndexIsUnbiased) {
  auto rng = make_stream(test::kSeed, 0, "index");
  const std::uint64_t bound = 7;
  std::vector<std::int64_t> draws;
  for (int i = 0; i < 140000; ++i) {
    const auto v = rng.uniform_index(bound);
    ASSERT_LT(v, bound);
    draws.push_back(static_cast<std::int64_t>(v));
  }
  int dof = 0;
  const double stat = test::chi_square(draws, std::vector<double>(bound, 1.0 / bound), dof);
  EXPECT_LT(stat, test::chi_square_bound(dof));
}

struct BinomialCase {
  std::int64_t trials;
  double p;
};

class BinomialSampler : public ::testing::TestWithParam<BinomialCase> {};

TEST_P(BinomialSampler, MatchesMassFunction) {
  const auto [trials, p] = GetParam();
  auto rng = make_stream(test::kSeed, static_cast<std::uint64_t>(trials), "binomial");
  const int N = 200000;
  std::vector<std::int64_t> draws;
  draws.reserve(N);
  for (int i = 0; i < N; ++i) {
    const auto v = sample_binomial(rng, trials, p);
    ASSERT_GE(v, 0);
    ASSERT_LE(v, trials);
    draws.push_back(v);
  }
  if (trials <= 20000) {
    int dof = 0;
    const double stat = test::chi_square(draws, binomial_pmf(trials, p), dof);
    EXPECT_LT(stat, test::chi_square_bound(dof)) << "dof " << dof;
  }
  double mean = 0.0;
  for (const auto d : draws) mean += static_cast<double>(d);
  mean /= N;
  const double sd = std::sqrt(static_cast<double>(trials) * p * (1.0 - p));
  EXPECT_NEAR(mean, static_cast<double>(trials) * p, 5.0 * sd / std::sqrt(N) + 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Regimes, BinomialSampler,
                         ::testing::Values(BinomialCase{10, 0.3}, BinomialCase{99, 0.01},
                                           BinomialCase{50, 0.9}, BinomialCase{1000, 0.3},
                                           BinomialCase{2000, 0.75}, BinomialCase{10000, 0.01},
                                           BinomialCase{1000000, 1e-4}, BinomialCase{10000000, 0.5}));

TEST(BinomialSampler, DegenerateProbabilities) {
  auto rng = make_stream(1, 0, "degenerate");
  EXPECT_EQ(sample_binomial(rng, 100, 0.0), 0);
  EXPECT_EQ(sample_binomial(rng, 100, 1.0), 100);
  EXPECT_EQ(sample_binomial(rng, 0, 0.5), 0);
}

TEST(Geometric, MeanMatches) {
  auto rng = make_stream(test::kSeed, 0, "geometric");
  const double p = 0.2;
  const int N = 200000;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) sum += static_cast<double>(sample_geometric(rng, p));
  const double mean = (1.0 - p) / p;
  const double sd = std::sqrt(1.0 - p) / p;
  EXPECT_NEAR(sum / N, mean, 5.0 * sd / std::sqrt(N));
  EXPECT_EQ(sample_geometric(rng, 1.0), 0);
}

}  // namespace
}  // namespace critwin
