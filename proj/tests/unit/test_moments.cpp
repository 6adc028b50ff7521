#include <gtest/gtest.h>

#include <cmath>

#include <json.hpp>

#include "critwin/chain.hpp"
#include "critwin/moments.hpp"
#include "test_support.hpp"

namespace critwin {
namespace {

/// Raw-moment oracle: E[(beta - z)^4] from the binomial mass function by
/// direct product, independent of the log-space summation.
double kappa_by_pmf(std::int64_t n, std::int64_t z, std::int64_t c, const CriticalWindow& w) {
  const auto pmf = binomial_pmf(n - c, q_prob(w, n, z));
  double sum = 0.0;
  for (std::size_t m = 0; m < pmf.size(); ++m) {
    const double d = static_cast<double>(m) - static_cast<double>(z);
    sum += d * d * d * d * pmf[m];
  }
  return sum;
}

TEST(MomentTriple, ZeroInfectives) {
  const auto m = moment_triple(100, 0, 10, AldousWindow{1.0});
  EXPECT_EQ(m.mu, 0.0);
  EXPECT_EQ(m.sigma2, 0.0);
  EXPECT_EQ(m.kappa, 0.0);
}

TEST(MomentTriple, Examples) {
  EXPECT_NEAR(moment_triple(100, 1, 50, AldousWindow{0.0}).mu, 0.5, 1e-14);
  EXPECT_NEAR(moment_triple(100, 1, 0, AldousWindow{0.0}).sigma2, 0.99, 1e-14);
}

TEST(MomentTriple, RejectsOutOfRange) {
  EXPECT_THROW(moment_triple(100, 1, 101, AldousWindow{0.0}), std::invalid_argument);
  EXPECT_THROW(moment_triple(100, -1, 0, AldousWindow{0.0}), std::invalid_argument);
}

TEST(KappaOracle, Examples) {
  EXPECT_EQ(kappa_oracle(50, 0, 10, AldousWindow{0.0}), 0.0);
  const auto a = moment_triple(10, 1, 0, AldousWindow{0.0}).kappa;
  EXPECT_NEAR(kappa_oracle(10, 1, 0, AldousWindow{0.0}) / a, 1.0, 1e-9);
  const auto b = moment_triple(50, 2, 25, AldousWindow{1.0}).kappa;
  EXPECT_NEAR(kappa_oracle(50, 2, 25, AldousWindow{1.0}) / b, 1.0, 1e-9);
}

TEST(KappaOracle, AgreesOnRandomTuples) {
  auto rng = make_stream(test::kSeed, 0, "kappa");
  for (int i = 0; i < 1000; ++i) {
    const auto n = static_cast<std::int64_t>(2 + rng.uniform_index(1999));
    const auto c = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(n + 1)));
    const auto z = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(std::min<std::int64_t>(n, 3 * std::cbrt(n) + 2) + 1)));
    const CriticalWindow w = i % 2 ? CriticalWindow{AldousWindow{-0.5 + 2.0 * rng.uniform()}}
                                   : CriticalWindow{GeneralWindow{1.0, 0.05 + 0.2 * rng.uniform()}};
    const double closed = moment_triple(n, z, c, w).kappa;
    const double oracle = kappa_oracle(n, z, c, w);
    ASSERT_NEAR(oracle, closed, 1e-9 * std::max(1.0, std::abs(oracle))) << n << " " << z << " " << c;
    if (n - c <= 300) {
      ASSERT_NEAR(kappa_by_pmf(n, z, c, w), closed, 1e-9 * std::max(1.0, std::abs(closed)));
    }
    ASSERT_GE(closed, 0.0);
  }
}

TEST(KappaOracle, RefusesLargeTrials) {
  EXPECT_THROW(kappa_oracle(5000, 1, 0, AldousWindow{0.0}), std::invalid_argument);
}

TEST(BoundSweep, GridDensityGuard) {
  EXPECT_THROW(bound_sweep({100, 1000}, 1.0, 1.0, SweepFamily{1.0, {}}, 7), std::invalid_argument);
}

TEST(BoundSweep, ZeroLambdaCornerContributesNothing) {
  // With z = 0 every deviation vanishes; a grid of a single z column has sup 0.
  const auto m = moment_triple(1000, 0, 0, AldousWindow{0.0});
  EXPECT_EQ(std::abs(m.mu - 0.0), 0.0);
}

TEST(BoundSweep, RatesAndDeterminism) {
  const auto a = bound_sweep({1000, 10000, 100000, 1000000}, 1.0, 1.0, SweepFamily{1.0, {}});
  const auto b = bound_sweep({1000, 10000, 100000, 1000000}, 1.0, 1.0, SweepFamily{1.0, {}});
  ASSERT_EQ(a.rows.size(), 12u);
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].sup_value, b.rows[i].sup_value);
  EXPECT_LE(a.mean_fit.slope, -0.25);
  EXPECT_LE(a.variance_fit.slope, -0.25);
  EXPECT_NEAR(a.kappa_fit.slope, 2.0 / 3.0, 0.15);
  const auto j = nlohmann::json::parse(sweep_summary_json(a));
  EXPECT_DOUBLE_EQ(j["slopes"]["mu"]["slope"].get<double>(), a.mean_fit.slope);
}

TEST(BoundSweep, GeneralFamilyRuns) {
  const auto s = bound_sweep({10000, 100000, 1000000}, 1.0, 1.0, SweepFamily{1.0, 0.2}, 16);
  EXPECT_EQ(s.rows.size(), 9u);
  for (const auto& row : s.rows) EXPECT_GE(row.sup_value, 0.0);
}

}  // namespace
}  // namespace critwin
