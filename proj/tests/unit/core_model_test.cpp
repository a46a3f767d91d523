// Copyright 2026 The modelshare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "modelshare/core_model.hpp"

#include <gtest/gtest.h>

#include <set>

#include "support/oracles.hpp"

namespace modelshare {
namespace {

GameConfig make_config(std::vector<int> players, double mu_e = 10.0, double sigma_sq = 1.0) {
  GameConfig c;
  c.players = std::move(players);
  c.mu_e = mu_e;
  c.sigma_sq = sigma_sq;
  return c;
}

TEST(ValidateTest, AcceptsSmallEqualPopulation) { EXPECT_NO_THROW(validate(make_config({5, 5, 5}))); }

TEST(ValidateTest, RejectsEmptyPopulation) {
  try {
    validate(make_config({}));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("empty population"), std::string::npos);
  }
}

TEST(ValidateTest, RejectsTooFewSamplesForRegression) {
  auto c = make_config({6});
  c.linreg = LinRegSpec{5, 1.0};
  try {
    validate(c);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("n must exceed d+1"), std::string::npos);
  }
  c.players = {7};
  EXPECT_NO_THROW(validate(c));
}

TEST(ValidateTest, RejectsBadParameters) {
  EXPECT_THROW(validate(make_config({5}, 0.0)), ValidationError);
  EXPECT_THROW(validate(make_config({5}, 1.0, -1.0)), ValidationError);
  EXPECT_THROW(validate(make_config({0})), ValidationError);
  EXPECT_NO_THROW(validate(make_config({5}, 1.0, 0.0)));
  auto c = make_config({5});
  c.linreg = LinRegSpec{0, 1.0};
  EXPECT_THROW(validate(c), ValidationError);
}

TEST(CoalitionTest, SortsAndChecksMembers) {
  const Coalition c({2, 0}, 3);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.members()[0], 0u);
  EXPECT_EQ(c.position_of(2), 1u);
  EXPECT_EQ(c.mask(), 0b101u);
  EXPECT_THROW(Coalition({}, 3), ValidationError);
  EXPECT_THROW(Coalition({1, 1}, 3), ValidationError);
  EXPECT_THROW(Coalition({3}, 3), ValidationError);
  EXPECT_THROW((void)c.position_of(1), ValidationError);
  EXPECT_EQ(Coalition::from_mask(0b101), c);
}

TEST(PartitionTest, RejectsOverlapAndGaps) {
  EXPECT_THROW(Partition({Coalition({0, 1}, 3), Coalition({1, 2}, 3)}, 3), ValidationError);
  EXPECT_THROW(Partition({Coalition({0, 1}, 3)}, 3), ValidationError);
  const Partition p({Coalition({2}, 3), Coalition({0, 1}, 3)}, 3);
  EXPECT_EQ(p.coalitions()[0].members()[0], 0u);
  EXPECT_EQ(p.coalition_of(2), Coalition({2}, 3));
}

TEST(EnumerationTest, SmallCounts) {
  EXPECT_EQ(enumerate_partitions(1).size(), 1u);
  EXPECT_EQ(enumerate_partitions(3).size(), 5u);
  EXPECT_EQ(enumerate_partitions(4).size(), 15u);
  const auto two = enumerate_coalitions(2);
  ASSERT_EQ(two.size(), 3u);
  EXPECT_EQ(two[0], Coalition({0}, 2));
  EXPECT_EQ(two[1], Coalition({1}, 2));
  EXPECT_EQ(two[2], Coalition({0, 1}, 2));
  EXPECT_EQ(enumerate_coalitions(3).size(), 7u);
  EXPECT_EQ(enumerate_coalitions(5).size(), 31u);
}

TEST(EnumerationTest, CountsMatchIndependentBellNumbers) {
  for (std::size_t m = 1; m <= 8; ++m) {
    EXPECT_EQ(enumerate_partitions(m).size(), oracle::bell(m)) << m;
    EXPECT_EQ(bell_number(m), oracle::bell(m)) << m;
  }
  EXPECT_EQ(bell_number(13), 27644437u);
}

TEST(EnumerationTest, MatchesIndependentEnumerationAsSets) {
  for (std::size_t m = 1; m <= 6; ++m) {
    std::set<std::vector<std::vector<PlayerIndex>>> expected;
    for (auto blocks : oracle::all_partitions(m)) {
      std::sort(blocks.begin(), blocks.end());
      expected.insert(blocks);
    }
    std::set<std::vector<std::vector<PlayerIndex>>> seen;
    for (const auto& p : enumerate_partitions(m)) {
      std::vector<std::vector<PlayerIndex>> blocks;
      std::vector<int> hits(m, 0);
      for (const auto& c : p.coalitions()) {
        blocks.emplace_back(c.members().begin(), c.members().end());
        for (const auto j : c.members()) ++hits[j];
      }
      for (const int h : hits) EXPECT_EQ(h, 1);
      std::sort(blocks.begin(), blocks.end());
      EXPECT_TRUE(seen.insert(blocks).second) << "duplicate partition";
    }
    EXPECT_EQ(seen, expected);
  }
}

TEST(EnumerationTest, CanonicalOrderIsDeterministic) {
  const auto a = enumerate_partitions(5);
  const auto b = enumerate_partitions(5);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.front(), Partition::grand(5));
  EXPECT_EQ(a.back(), Partition::singletons(5));
  PartitionEnumerator it(3);
  Partition p = Partition::grand(3);
  std::vector<std::vector<int>> labels{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 1, 2}};
  for (const auto& l : labels) {
    ASSERT_TRUE(it.next(p));
    EXPECT_EQ(p, Partition::from_labels(l));
  }
  EXPECT_FALSE(it.next(p));
}

TEST(EnumerationTest, CapsAreExplicit) {
  EXPECT_THROW(enumerate_partitions(14), CapExceeded);
  EXPECT_THROW(PartitionEnumerator(14), CapExceeded);
  EXPECT_THROW(enumerate_coalitions(21), CapExceeded);
  EXPECT_THROW(enumerate_partitions(0), ValidationError);
}

TEST(SchemeTest, ValidatesWeights) {
  const auto p = Partition::grand(2);
  EXPECT_THROW(validate_scheme(CoarseScheme{{0.5, 1.5}}, p), ValidationError);
  EXPECT_THROW(validate_scheme(CoarseScheme{{0.5}}, p), ValidationError);
  EXPECT_NO_THROW(validate_scheme(CoarseScheme{{0.0, 1.0}}, p));
  FineScheme fine;
  fine.rows[0] = {0.5, 0.5};
  fine.rows[1] = {0.25, 0.7};
  EXPECT_THROW(validate_scheme(fine, p), ValidationError);
  fine.rows[1] = {0.25, 0.75};
  EXPECT_NO_THROW(validate_scheme(fine, p));
  fine.rows[1] = {1.0};
  EXPECT_THROW(validate_scheme(fine, p), ValidationError);
}

TEST(TwoSizeTest, ValidationAndLabels) {
  EXPECT_THROW(validate(TwoSizeGame{5, 5, 1, 1}), ValidationError);
  EXPECT_THROW(validate(TwoSizeGame{5, 6, 0, 0}), ValidationError);
  EXPECT_EQ(labeled_players(TwoSizeGame{2, 7, 2, 1}), (std::vector<int>{2, 2, 7}));
}

TEST(TwoSizeTest, ThresholdComparison) {
  auto c = make_config({1}, 10.0, 1.0);
  EXPECT_EQ(compare_to_threshold(9, c), -1);
  EXPECT_EQ(compare_to_threshold(10, c), 0);
  EXPECT_EQ(compare_to_threshold(11, c), 1);
  c.sigma_sq = 0.1;  // 10 / 0.1 is 100 only up to rounding
  EXPECT_EQ(compare_to_threshold(100, c), 0);
  c.exact = ExactParams{Rational(10), Rational(1, 10), std::nullopt};
  EXPECT_EQ(compare_to_threshold(100, c), 0);
  EXPECT_EQ(compare_to_threshold(99, c), -1);
  c.sigma_sq = 0.0;
  c.exact.reset();
  EXPECT_EQ(compare_to_threshold(1000000, c), -1);
}

TEST(RationalTest, ParsesExactly) {
  EXPECT_EQ(parse_rational("10/4"), Rational(5, 2));
  EXPECT_EQ(parse_rational("0.1"), Rational(1, 10));
  EXPECT_EQ(parse_rational("-1.5e2"), Rational(-150));
  EXPECT_EQ(parse_rational("25e-2"), Rational(1, 4));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_EQ(to_rational(0.5), Rational(1, 2));
  EXPECT_NE(to_rational(0.1), Rational(1, 10));
  EXPECT_DOUBLE_EQ(to_double(Rational(1, 3)), 1.0 / 3.0);
}

}  // namespace
}  // namespace modelshare
