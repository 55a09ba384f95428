#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "linrs/satisficing.hpp"
#include "linrs/env/synthetic.hpp"
#include "oracles.hpp"

using namespace linrs;

namespace {

RsTable table_of(std::vector<std::uint64_t> counts, std::vector<double> values, double aleph) {
  return RsTable{std::move(counts), std::move(values), aleph};
}

RewardSampler constant_rewards(std::vector<double> r) {
  return [r = std::move(r)](std::size_t a) { return r.at(a); };
}

}  // namespace

TEST(RsValue, DirectArithmetic) {
  const auto t = table_of({5, 5}, {0.7, 0.1}, 0.5);
  EXPECT_NEAR(rs_value(t, 0), 0.1, 1e-15);
}

TEST(RsValue, ZeroWhenValueEqualsAleph) {
  const auto t = table_of({3, 11, 1}, {0.5, 0.5, 0.5}, 0.5);
  for (std::size_t a = 0; a < 3; ++a) EXPECT_EQ(rs_value(t, a), 0.0);
}

TEST(RsValue, EmptyTableThrows) {
  const auto t = table_of({0, 0}, {0.0, 0.0}, 0.5);
  EXPECT_THROW(rs_value(t, 0), InvalidArgument);
}

TEST(RsValue, ArgmaxMatchesExhaustiveEvaluation) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + rng() % 7;
    RsTable t{std::vector<std::uint64_t>(k), std::vector<double>(k), u(rng)};
    for (std::size_t a = 0; a < k; ++a) {
      t.counts[a] = 1 + rng() % 50;
      t.values[a] = u(rng);
    }
    double n = 0;
    for (auto c : t.counts) n += static_cast<double>(c);
    std::vector<double> brute(k);
    for (std::size_t a = 0; a < k; ++a)
      brute[a] = static_cast<double>(t.counts[a]) / n * (t.values[a] - t.aleph);
    EXPECT_EQ(argmax(std::span<const double>(rs_values(t))), oracle::argmax(brute));
  }
}

TEST(RsValue, InvariantToCountScaling) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = table_of({1 + rng() % 20, 1 + rng() % 20, 1 + rng() % 20}, {0.1, 0.6, 0.9}, 0.5);
    auto scaled = t;
    const std::uint64_t c = 1 + rng() % 9;
    for (auto& n : scaled.counts) n *= c;
    for (std::size_t a = 0; a < 3; ++a) EXPECT_NEAR(rs_value(t, a), rs_value(scaled, a), 1e-15);
  }
}

TEST(AlephOpt, Midpoint) {
  const std::vector<double> m{0.9, 0.5};
  EXPECT_DOUBLE_EQ(aleph_opt(m), 0.7);
}

TEST(AlephOpt, EqualMeans) {
  const std::vector<double> m{0.6, 0.6};
  EXPECT_DOUBLE_EQ(aleph_opt(m), 0.6);
}

TEST(AlephOpt, FewerThanTwoArmsThrows) {
  const std::vector<double> m{0.6};
  EXPECT_THROW(aleph_opt(m), InvalidArgument);
}

TEST(AlephOpt, MatchesSortOracleOnSigmoidMeans) {
  SyntheticSpec spec;
  spec.dim = 16;
  spec.arms = 8;
  Rng rng(5);
  const auto params = sample_parameters(spec, rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> eps(0.0, std::sqrt(spec.noise_var));
  for (int trial = 0; trial < 100; ++trial) {
    RowMajorMatrix x(8, 16);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
    const auto means = true_means(ContextMatrix(x), params, eps(rng));
    auto sorted = means;
    std::sort(sorted.begin(), sorted.end());
    const double expected = (sorted[7] + sorted[6]) / 2.0;
    EXPECT_DOUBLE_EQ(aleph_opt(means), expected);
    if (sorted[7] > sorted[6]) {
      EXPECT_GT(sorted[7], aleph_opt(means));
      EXPECT_GT(aleph_opt(means), sorted[6]);
    }
  }
}

TEST(RsPolicyStep, PositiveDeltaDominates) {
  auto t = table_of({5, 5}, {0.6, 0.4}, 0.5);  // delta = (+0.1, -0.1)
  EXPECT_EQ(rs_policy_step(t, constant_rewards({0.6, 0.4})), 0u);
  EXPECT_EQ(t.counts[0], 6u);
  EXPECT_EQ(t.total(), 11u);
}

TEST(RsPolicyStep, AllNegativePrefersLeastTried) {
  auto t = table_of({9, 1}, {0.4, 0.4}, 0.5);
  EXPECT_EQ(rs_policy_step(t, constant_rewards({0.4, 0.4})), 1u);
}

TEST(RsPolicyStep, RunningMeanUpdate) {
  auto t = make_rs_table(2, 0.5, constant_rewards({1.0, 0.0}));
  EXPECT_EQ(t.counts, (std::vector<std::uint64_t>{1, 1}));
  t.record(0, 0.0);
  t.record(0, 0.5);
  EXPECT_NEAR(t.values[0], 0.5, 1e-15);
  EXPECT_EQ(t.total(), 4u);
}

TEST(RsPolicyStep, ExploitsTheSingleSatisfactoryArm) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 2 + rng() % 6;
    RsTable t{std::vector<std::uint64_t>(k), std::vector<double>(k), 0.5};
    const std::size_t good = rng() % k;
    for (std::size_t a = 0; a < k; ++a) {
      t.counts[a] = 1 + rng() % 100;
      t.values[a] = a == good ? 0.5 + 0.5 * u(rng) + 1e-9 : 0.5 * u(rng);
    }
    const auto picked = rs_policy_step(t, constant_rewards(std::vector<double>(k, 0.0)));
    EXPECT_EQ(picked, good);
  }
}

TEST(RsPolicyStep, AllNegativeChoosesSmallestShareAmongEqualDeltas) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + rng() % 6;
    RsTable t{std::vector<std::uint64_t>(k), std::vector<double>(k, 0.2), 0.5};
    for (auto& c : t.counts) c = 1 + rng() % 100;
    const auto min_count = *std::min_element(t.counts.begin(), t.counts.end());
    const auto picked = rs_policy_step(t, constant_rewards(std::vector<double>(k, 0.2)));
    EXPECT_EQ(t.counts[picked] - 1, min_count);
  }
}

TEST(RsPolicyStep, BernoulliBanditConvergesToOptimalArm) {
  int optimal = 0;
  int total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double p[2] = {0.7, 0.3};
    RewardSampler pull = [&](std::size_t a) { return u(rng) < p[a] ? 1.0 : 0.0; };
    auto t = make_rs_table(2, 0.5, pull);
    for (int step = 0; step < 5000; ++step) {
      const auto arm = rs_policy_step(t, pull);
      if (step >= 4000) {
        optimal += arm == 0;
        ++total;
      }
    }
  }
  EXPECT_GE(static_cast<double>(optimal) / total, 0.95);
}
