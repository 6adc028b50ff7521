#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "cli/enumeration.hpp"
#include "critwin/chain.hpp"
#include "test_support.hpp"

namespace critwin {
namespace {

TEST(QProb, Examples) {
  EXPECT_EQ(q_prob(AldousWindow{0.0}, 100, 0), 0.0);
  EXPECT_NEAR(q_prob(AldousWindow{0.0}, 100, 1), 0.01, 1e-15);
  const double p = 0.01 + std::pow(100.0, -4.0 / 3.0);
  EXPECT_NEAR(q_prob(AldousWindow{1.0}, 100, 2), 1.0 - (1.0 - p) * (1.0 - p), 1e-14);
  EXPECT_NEAR(q_prob(AldousWindow{1.0}, 100, 2), 0.0241612, 1e-7);
}

TEST(QProb, StableForTinyP) {
  const double p = 1e-12;
  EXPECT_NEAR(infection_probability(p, 3) / (3 * p), 1.0, 1e-9);
}

TEST(Step, AbsorbedStates) {
  auto rng = make_stream(test::kSeed, 0, "absorbed");
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(step({0, 5}, AldousWindow{0.0}, 100, rng), (ChainState{0, 5}));
    EXPECT_EQ(step({1, 100}, AldousWindow{0.0}, 100, rng), (ChainState{0, 100}));
  }
}

TEST(Step, MeanOffspring) {
  auto rng = make_stream(test::kSeed, 0, "offspring");
  const int N = 1000000;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) {
    const auto s = step({1, 1}, AldousWindow{0.0}, 100, rng);
    ASSERT_EQ(s.c, 1 + s.z);
    sum += static_cast<double>(s.z);
  }
  EXPECT_NEAR(sum / N, 0.99, 0.004);
}

TEST(SimulateTrace, NEqualsK) {
  auto rng = make_stream(test::kSeed, 0, "n-eq-k");
  const auto t = simulate_trace(7, 7, AldousWindow{0.0}, 10, rng);
  EXPECT_EQ(t.Z, (std::vector<std::int64_t>{7}));
  EXPECT_EQ(t.C, (std::vector<std::int64_t>{7}));
  EXPECT_FALSE(t.truncated);
  EXPECT_EQ(t.Z_at(1), 0);
}

TEST(SimulateTrace, FirstGenerationMean) {
  auto rng = make_stream(test::kSeed, 0, "first-gen");
  const int N = 1000000;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) sum += static_cast<double>(simulate_trace(100, 5, AldousWindow{0.0}, 1, rng).Z_at(1));
  EXPECT_NEAR(sum / N, 95.0 * (1.0 - std::pow(0.99, 5)), 0.02);
}

TEST(SimulateTrace, StructuralInvariants) {
  auto rng = make_stream(test::kSeed, 0, "invariants");
  for (int rep = 0; rep < 500; ++rep) {
    const RunConfig c{.n = 5000, .x = 1.0, .window = rep % 2 ? CriticalWindow{GeneralWindow{1.0, 0.3}} : CriticalWindow{AldousWindow{1.0}}};
    const auto t = simulate_trace(c, default_max_steps(c.window, c.n), rng);
    ASSERT_EQ(t.Z.front(), derive_k(c));
    ASSERT_EQ(t.C.front(), t.Z.front());
    for (std::size_t h = 1; h < t.Z.size(); ++h) {
      ASSERT_GT(t.Z[h], 0);
      ASSERT_EQ(t.C[h], t.C[h - 1] + t.Z[h]);
      ASSERT_LE(t.C[h], c.n);
    }
    if (!t.truncated) {
      ASSERT_EQ(t.Z_at(static_cast<std::int64_t>(t.Z.size())), 0);
      ASSERT_EQ(t.C_at(static_cast<std::int64_t>(t.Z.size()) + 10), t.total_infected());
    }
  }
}

TEST(SimulateTrace, TruncationFlagged) {
  auto rng = make_stream(test::kSeed, 0, "truncated");
  const auto t = simulate_trace(1000000, 1000, AldousWindow{0.0}, 2, rng);
  EXPECT_TRUE(t.truncated);
  EXPECT_EQ(t.Z.size(), 3u);
  EXPECT_THROW(simulate_trace(10, 1, AldousWindow{0.0}, 0, rng), std::invalid_argument);
}

TEST(DefaultMaxSteps, Values) {
  EXPECT_EQ(default_max_steps(AldousWindow{0.0}, 1000), 500);
  EXPECT_EQ(default_max_steps(AldousWindow{0.0}, 1001), 550);
  EXPECT_EQ(default_max_steps(GeneralWindow{0.0, 0.1}, 1000), 500);
}

TEST(Kernel, RowsSumToOne) {
  for (const double p : {0.05, 0.3, 0.9}) {
    const KernelTable table(12, p);
    for (std::int64_t z = 0; z <= 12; ++z) {
      for (std::int64_t c = 0; c <= 12; ++c) {
        const auto& row = table.row(z, c);
        ASSERT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
      }
    }
  }
}

TEST(ExactProfile, SingleEdge) {
  const auto law = exact_profile_distribution(2, 1, 0.5, 2);
  ASSERT_EQ(law.size(), 2u);
  EXPECT_NEAR(law.at({1, 0}), 0.5, 1e-15);
  EXPECT_NEAR(law.at({1, 1, 0}), 0.5, 1e-15);
}

TEST(ExactProfile, AllInfectedAtStart) {
  for (const double p : {0.1, 0.7}) {
    const auto law = exact_profile_distribution(3, 3, p, 3);
    ASSERT_EQ(law.size(), 1u);
    EXPECT_NEAR(law.at({3, 0}), 1.0, 1e-15);
  }
}

TEST(ExactProfile, SecondGenerationMass) {
  const auto law = exact_profile_distribution(3, 1, 0.5, 3);
  double mass = 0.0;
  for (const auto& [path, w] : law) {
    if (path.size() > 1 && path[1] == 2) mass += w;
  }
  EXPECT_NEAR(mass, 0.25, 1e-15);
}

TEST(ExactProfile, MassesSumToOne) {
  for (std::int64_t n = 2; n <= kExactProfileMaxN; ++n) {
    const auto law = exact_profile_distribution(n, 1, 1.3 / static_cast<double>(n), n);
    double total = 0.0;
    for (const auto& [path, w] : law) total += w;
    ASSERT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(ExactProfile, RefusesLargeN) {
  EXPECT_THROW(exact_profile_distribution(kExactProfileMaxN + 1, 1, 0.1, 5), std::invalid_argument);
}

TEST(ExactProfile, EqualsGraphEnumeration) {
  for (const std::int64_t n : {3, 4, 5}) {
    for (const std::int64_t k : {1, 2}) {
      for (const double p : {0.2, 0.5}) {
        const auto tv = cli::total_variation(exact_profile_distribution(n, k, p, n),
                                             cli::enumerate_graph_profiles(n, k, p));
        EXPECT_LE(tv, 1e-10) << "n " << n << " k " << k << " p " << p;
      }
    }
  }
}

TEST(ExactProfile, MatchesMonteCarloChain) {
  const std::int64_t n = 8;
  const std::int64_t k = 2;
  const double p = 0.2;
  const auto law = exact_profile_distribution(n, k, p, n);
  auto rng = make_stream(test::kSeed, 0, "mc-chain");
  const int N = 400000;
  ProfileDistribution empirical;
  for (int i = 0; i < N; ++i) {
    ChainState s{k, k};
    std::vector<std::int64_t> path{k};
    while (s.z > 0) {
      s = step(s, p, n, rng);
      path.push_back(s.z);
    }
    empirical[path] += 1.0 / N;
  }
  EXPECT_LE(cli::total_variation(law, empirical), 0.01);
}

TEST(Coupling, TotalInfectedMonotoneInP) {
  // Common random numbers: one uniform per susceptible-infective contact
  // decides infection for every p at once.
  const std::int64_t n = 100;
  const std::int64_t k = 3;
  const std::vector<double> ps = {0.004, 0.008, 0.01, 0.012, 0.016};
  std::vector<double> totals(ps.size(), 0.0);
  const int N = 1000;
  for (int rep = 0; rep < N; ++rep) {
    auto rng = make_stream(test::kSeed, static_cast<std::uint64_t>(rep), "coupling");
    std::vector<std::vector<double>> u(n, std::vector<double>(n));
    for (auto& row : u) {
      for (auto& v : row) v = rng.uniform();
    }
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
      std::vector<int> state(n, 0);  // 0 susceptible, 1 infective, 2 removed
      for (std::int64_t v = 0; v < k; ++v) state[v] = 1;
      std::int64_t infected = k;
      bool active = true;
      while (active) {
        std::vector<int> next = state;
        active = false;
        for (std::int64_t s = 0; s < n; ++s) {
          if (state[s] != 0) continue;
          for (std::int64_t i = 0; i < n; ++i) {
            if (state[i] == 1 && u[i][s] < ps[pi]) {
              next[s] = 1;
              ++infected;
              active = true;
              break;
            }
          }
        }
        for (std::int64_t v = 0; v < n; ++v) {
          if (state[v] == 1) next[v] = 2;
        }
        state = next;
      }
      totals[pi] += static_cast<double>(infected);
    }
  }
  for (std::size_t i = 1; i < ps.size(); ++i) EXPECT_GE(totals[i], totals[i - 1]);
}

}  // namespace
}  // namespace critwin
