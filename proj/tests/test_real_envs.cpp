#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "linrs/env/jester.hpp"
#include "linrs/env/mushroom.hpp"
#include "linrs/harness.hpp"

using namespace linrs;

namespace {

// Three rows in the canonical format.
const char* kMushroomFixture =
    "p,x,s,n,t,p,f,c,n,k,e,e,s,s,w,w,p,w,o,p,k,s,u\n"
    "e,x,s,y,t,a,f,c,b,k,e,c,s,s,w,w,p,w,o,p,n,n,g\n"
    "e,b,s,w,t,l,f,c,b,n,e,?,s,s,w,w,p,w,o,p,n,n,m\n";

// Column offsets of each attribute group, written out by hand from the
// per-attribute category counts 6,4,10,2,9,2,2,2,12,2,5,4,4,9,9,1,4,3,5,9,6,7.
const std::size_t kOffsets[22] = {0,  6,  10, 20, 22, 31, 33, 35, 37, 49,  51,
                                  56, 60, 64, 73, 82, 83, 87, 90, 95, 104, 110};

std::string jester_line(const std::vector<double>& ratings) {
  std::ostringstream s;
  for (std::size_t i = 0; i < ratings.size(); ++i) s << (i ? "," : "") << ratings[i];
  return s.str();
}

std::vector<double> ramp(std::size_t n, double start, double step) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = start + step * static_cast<double>(i);
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Mushroom
// ---------------------------------------------------------------------------

TEST(MushroomEncoder, VocabularyGivesDocumentedDimension) {
  const auto& enc = mushroom::encoder();
  EXPECT_EQ(enc.dim, 117u);
  for (std::size_t i = 0; i < 22; ++i) EXPECT_EQ(enc.offsets[i], kOffsets[i]) << "attribute " << i;
}

TEST(LoadMushroom, HandEncodedFixture) {
  std::istringstream in(kMushroomFixture);
  const auto data = load_mushroom(in);
  ASSERT_EQ(data.rows.size(), 3u);
  EXPECT_EQ(data.edible, 2u);
  EXPECT_EQ(data.poisonous, 1u);

  // Hand-computed hot columns: offset + position of the symbol in its group.
  const std::vector<std::vector<std::size_t>> hot = {
      {0 + 2, 6 + 3, 10 + 0, 20 + 0, 22 + 7, 31 + 1, 33 + 0, 35 + 1, 37 + 0, 49 + 0, 51 + 2,
       56 + 3, 60 + 3, 64 + 7, 73 + 7, 82 + 0, 83 + 2, 87 + 1, 90 + 4, 95 + 0, 104 + 3, 110 + 4},
      {0 + 2, 6 + 3, 10 + 9, 20 + 0, 22 + 0, 31 + 1, 33 + 0, 35 + 0, 37 + 0, 49 + 0, 51 + 1,
       56 + 3, 60 + 3, 64 + 7, 73 + 7, 82 + 0, 83 + 2, 87 + 1, 90 + 4, 95 + 1, 104 + 2, 110 + 0},
      {0 + 0, 6 + 3, 10 + 8, 20 + 0, 22 + 1, 31 + 1, 33 + 0, 35 + 0, 37 + 1, 49 + 0, 51 + 4,
       56 + 3, 60 + 3, 64 + 7, 73 + 7, 82 + 0, 83 + 2, 87 + 1, 90 + 4, 95 + 1, 104 + 2, 110 + 2},
  };
  for (std::size_t r = 0; r < 3; ++r) {
    const auto& f = data.rows[r].features;
    ASSERT_EQ(f.size(), 117);
    Vector expected = Vector::Zero(117);
    for (auto c : hot[r]) expected[static_cast<Eigen::Index>(c)] = 1.0;
    EXPECT_EQ(f, expected) << "row " << r;
    EXPECT_EQ(f.sum(), 22.0);
  }
  EXPECT_FALSE(data.rows[0].edible);
  EXPECT_TRUE(data.rows[1].edible);
}

TEST(LoadMushroom, OneHotGroupsSumToOne) {
  std::istringstream in(kMushroomFixture);
  const auto data = load_mushroom(in);
  for (const auto& row : data.rows)
    for (std::size_t i = 0; i < 22; ++i) {
      const std::size_t end = i + 1 < 22 ? kOffsets[i + 1] : 117;
      EXPECT_EQ(row.features.segment(static_cast<Eigen::Index>(kOffsets[i]),
                                     static_cast<Eigen::Index>(end - kOffsets[i])).sum(), 1.0);
    }
}

TEST(LoadMushroom, EmptyInput) {
  std::istringstream in("");
  const auto data = load_mushroom(in);
  EXPECT_TRUE(data.rows.empty());
  EXPECT_EQ(data.edible, 0u);
  EXPECT_EQ(data.poisonous, 0u);
}

TEST(LoadMushroom, UnknownSymbolNamesRowAndColumn) {
  std::istringstream in(
      "e,x,s,y,t,a,f,c,b,k,e,c,s,s,w,w,p,w,o,p,n,n,g\n"
      "e,x,s,y,t,a,f,c,b,k,e,c,s,s,w,w,p,w,o,p,n,n,q\n");
  try {
    load_mushroom(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("line 2"), std::string::npos) << what;
    EXPECT_NE(what.find("column 23"), std::string::npos) << what;
  }
}

TEST(LoadMushroom, WrongColumnCountIsFormatError) {
  std::istringstream in("e,x,s,y\n");
  EXPECT_THROW(load_mushroom(in), FormatError);
  std::istringstream bad_class("z,x,s,y,t,a,f,c,b,k,e,c,s,s,w,w,p,w,o,p,n,n,g\n");
  EXPECT_THROW(load_mushroom(bad_class), ParseError);
  EXPECT_THROW(load_mushroom(std::string("/nonexistent/mushroom.data")), DataError);
}

TEST(MushroomRound, RewardTable) {
  std::istringstream in(kMushroomFixture);
  const auto data = load_mushroom(in);
  Rng rng(1);
  const auto edible = mushroom_round(data.rows[1], rng);
  const auto poisonous = mushroom_round(data.rows[0], rng);

  EXPECT_EQ(edible.true_means, (std::vector<double>{5.0, 0.0}));
  EXPECT_EQ(poisonous.true_means, (std::vector<double>{-15.0, 0.0}));
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(edible.sample_reward(mushroom::kEat), 5.0);
    EXPECT_EQ(edible.sample_reward(mushroom::kNoEat), 0.0);
    EXPECT_EQ(poisonous.sample_reward(mushroom::kNoEat), 0.0);
  }
  EXPECT_EQ(edible.regret(mushroom::kNoEat), 5.0);
  EXPECT_EQ(poisonous.regret(mushroom::kEat), 15.0);
  EXPECT_EQ(edible.contexts.arms(), 2u);
  EXPECT_EQ(Vector(edible.contexts.row(0)), Vector(edible.contexts.row(1)));

  double sum = 0.0;
  std::set<double> seen;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double r = poisonous.sample_reward(mushroom::kEat);
    seen.insert(r);
    sum += r;
  }
  EXPECT_EQ(seen, (std::set<double>{-35.0, 5.0}));
  EXPECT_NEAR(sum / n, -15.0, 0.3);
}

TEST(MushroomEnvironment, SeededOrderIsAPermutation) {
  std::istringstream in(kMushroomFixture);
  MushroomEnvironment env(load_mushroom(in));
  EXPECT_EQ(env.dim(), 117u);
  EXPECT_TRUE(env.shuffle_rows());
  const auto a = row_order(env, 42), b = row_order(env, 42);
  EXPECT_EQ(a, b);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_THROW(MushroomEnvironment(MushroomData{}), InvalidArgument);
}

// ---------------------------------------------------------------------------
// Jester
// ---------------------------------------------------------------------------

TEST(LoadJester, SplitsFeaturesAndActions) {
  const auto first = ramp(40, -9.5, 0.25);
  const auto second = ramp(40, 9.75, -0.5);
  std::istringstream in(jester_line(first) + "\n" + jester_line(second) + "\n");
  const auto data = load_jester(in);
  ASSERT_EQ(data.rows.size(), 2u);
  EXPECT_EQ(data.excluded, 0u);
  for (std::size_t r = 0; r < 2; ++r) {
    const auto& src = r == 0 ? first : second;
    const auto& row = data.rows[r];
    ASSERT_EQ(row.features.size(), 32);
    ASSERT_EQ(row.actions.size(), 8u);
    for (std::size_t i = 0; i < 32; ++i) EXPECT_EQ(row.features[static_cast<Eigen::Index>(i)], src[i]);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(row.actions[i], src[32 + i]);
  }
}

TEST(LoadJester, MissingRatingsExcludeTheRow) {
  auto full = ramp(40, 0.0, 0.1);
  auto with_99 = full;
  with_99[5] = 99;
  std::string with_empty = jester_line(full);
  with_empty.replace(0, with_empty.find(','), "");  // first cell empty
  std::istringstream in(jester_line(full) + "\n" + jester_line(with_99) + "\n" + with_empty + "\n\n");
  const auto data = load_jester(in);
  EXPECT_EQ(data.rows.size(), 1u);
  EXPECT_EQ(data.excluded, 2u);
}

TEST(LoadJester, ExtraColumnsIgnoredWithStandardSplit) {
  auto wide = ramp(100, -5.0, 0.1);
  wide[60] = 99;  // outside the used columns
  std::istringstream in(jester_line(wide) + "\n");
  EXPECT_EQ(load_jester(in).rows.size(), 1u);
}

TEST(LoadJester, RangeHandling) {
  auto row = ramp(40, 0.0, 0.0);
  row[0] = 10.0000005;
  std::istringstream slack(jester_line(row) + "\n");
  const auto data = load_jester(slack);
  ASSERT_EQ(data.rows.size(), 1u);
  EXPECT_EQ(data.rows[0].features[0], 10.0);

  row[0] = 10.5;
  std::istringstream out_of_range(jester_line(row) + "\n");
  EXPECT_THROW(load_jester(out_of_range), DataError);

  std::istringstream short_row("1,2,3\n");
  EXPECT_THROW(load_jester(short_row), FormatError);

  std::istringstream garbage(jester_line(ramp(39, 0.0, 0.0)) + ",abc\n");
  EXPECT_THROW(load_jester(garbage), ParseError);
}

TEST(LoadJester, CustomColumnLists) {
  const auto src = ramp(12, -1.0, 0.5);
  JesterColumns cols{{10, 0, 3}, {1, 2}};
  std::istringstream in(jester_line(src) + "\n");
  const auto data = load_jester(in, cols);
  ASSERT_EQ(data.rows.size(), 1u);
  EXPECT_EQ(data.rows[0].features[0], src[10]);
  EXPECT_EQ(data.rows[0].features[2], src[3]);
  EXPECT_EQ(data.rows[0].actions, (std::vector<double>{src[1], src[2]}));
}

TEST(JesterRound, DeterministicRatingsAndRegret) {
  JesterRow row;
  row.features = Vector::Constant(32, 1.0);
  row.actions = {1.0, -2.0, 3.5, 9.9, 0.0, -10.0, 2.0, 9.0};
  const auto round = jester_round(row);
  EXPECT_EQ(round.optimal_arm(), 3u);
  EXPECT_EQ(round.regret(3), 0.0);
  for (std::size_t a = 0; a < 8; ++a) {
    EXPECT_EQ(round.sample_reward(a), row.actions[a]);
    EXPECT_DOUBLE_EQ(round.regret(a), 9.9 - row.actions[a]);
  }
  EXPECT_EQ(round.contexts.arms(), 8u);
  EXPECT_EQ(round.contexts.dim(), 32u);
}

TEST(JesterRound, AllEqualRatingsHaveNoRegret) {
  JesterRow row;
  row.features = Vector::Zero(32);
  row.actions.assign(8, 4.25);
  const auto round = jester_round(row);
  for (std::size_t a = 0; a < 8; ++a) EXPECT_EQ(round.regret(a), 0.0);
}

TEST(JesterRound, RandomRegretMatchesSubtraction) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    JesterRow row;
    row.features = Vector::Zero(32);
    for (int a = 0; a < 8; ++a) row.actions.push_back(u(rng));
    const auto round = jester_round(row);
    const double best = *std::max_element(row.actions.begin(), row.actions.end());
    const std::size_t pick = rng() % 8;
    EXPECT_EQ(round.regret(pick), best - row.actions[pick]);
    EXPECT_LE(round.regret(pick), 20.0);
  }
}
