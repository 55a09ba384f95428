#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "linrs/bandit.hpp"

using namespace linrs;

namespace {

RoundLog log_with(double regret, int greedy = 1) {
  RoundLog l;
  l.inst_regret = regret;
  l.greedy = greedy;
  return l;
}

}  // namespace

TEST(CumulativeRegret, OptimalPlayIsZero) {
  std::vector<RoundLog> logs(25, log_with(0.0));
  for (double v : cumulative_regret(logs)) EXPECT_EQ(v, 0.0);
}

TEST(CumulativeRegret, ConstantGap) {
  // p* = 0.9, chosen 0.7, ten steps
  EnvironmentRound round{ContextMatrix::shared(Vector::Ones(1), 2), {0.9, 0.7}, {}};
  std::vector<RoundLog> logs;
  for (int t = 0; t < 10; ++t) logs.push_back(log_with(round.regret(1)));
  EXPECT_NEAR(cumulative_regret(logs).back(), 2.0, 1e-12);
}

TEST(CumulativeRegret, MatchesDirectRecomputationAndIsMonotone) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RoundLog> logs;
  std::vector<double> optimal, chosen;
  for (int t = 0; t < 300; ++t) {
    const double best = u(rng);
    const double pick = best * u(rng);
    optimal.push_back(best);
    chosen.push_back(pick);
    logs.push_back(log_with(best - pick));
  }
  const auto cum = cumulative_regret(logs);
  double sum = 0.0;
  for (std::size_t t = 0; t < logs.size(); ++t) {
    sum += optimal[t] - chosen[t];
    EXPECT_NEAR(cum[t], sum, 1e-12);
    if (t > 0) {
      EXPECT_GE(cum[t], cum[t - 1]);
    }
  }
}

TEST(GreedyRate, AlwaysGreedyIsOne) {
  std::vector<std::vector<RoundLog>> reps(4, std::vector<RoundLog>(50, log_with(0.0, 1)));
  for (double v : greedy_rate(reps)) EXPECT_EQ(v, 1.0);
}

TEST(GreedyRate, AlternatingSingleReplication) {
  std::vector<RoundLog> logs;
  for (int t = 0; t < 10; ++t) logs.push_back(log_with(0.0, t % 2 == 0 ? 1 : 0));
  const auto rate = greedy_rate({logs});
  for (int t = 0; t < 10; ++t) EXPECT_EQ(rate[t], t % 2 == 0 ? 1.0 : 0.0);
}

TEST(GreedyRate, MatchesDirectAveraging) {
  const int grid[3][6] = {{1, 0, 1, 1, 0, 0}, {0, 0, 1, 0, 1, 1}, {1, 1, 1, 0, 0, 1}};
  std::vector<std::vector<RoundLog>> reps(3);
  for (int r = 0; r < 3; ++r)
    for (int t = 0; t < 6; ++t) reps[r].push_back(log_with(0.0, grid[r][t]));
  const auto rate = greedy_rate(reps);
  for (int t = 0; t < 6; ++t) {
    const double mean = (grid[0][t] + grid[1][t] + grid[2][t]) / 3.0;
    EXPECT_DOUBLE_EQ(rate[t], mean);
    EXPECT_GE(rate[t], 0.0);
    EXPECT_LE(rate[t], 1.0);
  }
}

TEST(GreedyRate, MismatchedHorizonsThrow) {
  std::vector<std::vector<RoundLog>> reps{std::vector<RoundLog>(5), std::vector<RoundLog>(6)};
  EXPECT_THROW(greedy_rate(reps), InvalidArgument);
}

TEST(EnvironmentRound, OptimalArmTiesGoToLowestIndex) {
  EnvironmentRound round{ContextMatrix::shared(Vector::Ones(2), 3), {0.4, 0.8, 0.8}, {}};
  EXPECT_EQ(round.optimal_arm(), 1u);
  EXPECT_EQ(round.regret(2), 0.0);
  EXPECT_DOUBLE_EQ(round.regret(0), 0.4);
}

TEST(Argmax, TiesAndEmpty) {
  const std::vector<double> v{0.2, 0.2, 0.1};
  EXPECT_EQ(argmax(std::span<const double>(v)), 0u);
  EXPECT_THROW(argmax(std::span<const double>()), InvalidArgument);
}

TEST(ContextMatrix, SharedRowsAreIdentical) {
  Vector x(3);
  x << 1.0, 2.0, 3.0;
  const auto ctx = ContextMatrix::shared(x, 4);
  EXPECT_EQ(ctx.arms(), 4u);
  EXPECT_EQ(ctx.dim(), 3u);
  for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(Vector(ctx.row(a)), x);
}

TEST(ContextMatrix, RejectsNonFinite) {
  RowMajorMatrix m = RowMajorMatrix::Ones(2, 2);
  m(1, 0) = std::nan("");
  EXPECT_THROW(ContextMatrix{m}, InvalidArgument);
}

TEST(RoundLogCsv, HeaderAndCumulativeColumn) {
  std::vector<RoundLog> logs{log_with(0.5, 0), log_with(0.25, 1)};
  logs[0].step = 1;
  logs[1].step = 2;
  std::ostringstream out;
  write_round_log_csv(out, logs);
  EXPECT_EQ(out.str(),
            "step,arm,reward,inst_regret,cum_regret,greedy,decision_time_s\n"
            "1,0,0,0.5,0.5,0,0\n"
            "2,0,0,0.25,0.75,1,0\n");
}

TEST(DeriveSeed, DistinctStreamsAndReproducible) {
  EXPECT_EQ(derive_seed(7, 1, 2), derive_seed(7, 1, 2));
  EXPECT_NE(derive_seed(7, 1, 2), derive_seed(7, 2, 1));
  EXPECT_NE(derive_seed(7, 1, 2), derive_seed(8, 1, 2));
}
