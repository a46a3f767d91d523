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

#include "modelshare/stability.hpp"

#include <gtest/gtest.h>

#include <random>

#include "modelshare/errors.hpp"
#include "support/monotonicity_grid.hpp"
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

Partition make_partition(std::vector<std::vector<PlayerIndex>> blocks, std::size_t m) {
  std::vector<Coalition> coalitions;
  for (auto& b : blocks) coalitions.emplace_back(std::move(b), m);
  return Partition(std::move(coalitions), m);
}

Coalition blocking_coalition(const StabilityVerdict& v) { return std::get<BlockingWitness>(*v.witness).coalition; }

TEST(PreferenceOrderTest, EpsilonBands) {
  const PreferenceOrder order;
  EXPECT_TRUE(order.strictly_prefers(0.9, 1.0));
  EXPECT_FALSE(order.strictly_prefers(1.0 - 1e-12, 1.0));
  EXPECT_TRUE(order.weakly_prefers(1.0 + 1e-12, 1.0));
  EXPECT_FALSE(order.weakly_prefers(1.0 + 1e-6, 1.0));
  EXPECT_FALSE(order.strictly_prefers(0.0, 0.0));
}

TEST(CoreTest, Examples) {
  EXPECT_TRUE(is_core_stable(Partition::grand(3), UniformScheme{}, make_config({5, 5, 5})).stable);
  const auto t3 = is_core_stable(Partition::grand(3), UniformScheme{}, make_config({25, 25, 25}));
  ASSERT_FALSE(t3.stable);
  EXPECT_EQ(blocking_coalition(t3), Coalition::singleton(0));
  const auto t2 = is_core_stable(make_partition({{0}, {1, 2}}, 3), UniformScheme{}, make_config({5, 5, 25}));
  ASSERT_FALSE(t2.stable);
  EXPECT_EQ(blocking_coalition(t2), Coalition({0, 1}, 3));
}

TEST(StrictCoreTest, Examples) {
  EXPECT_TRUE(is_strict_core_stable(Partition::grand(3), UniformScheme{}, make_config({5, 5, 5})).stable);
  // Every coalition of two boundary players has error exactly sigma^2.
  const auto tie = make_config({10, 10});
  EXPECT_TRUE(is_core_stable(Partition::singletons(2), UniformScheme{}, tie).stable);
  EXPECT_TRUE(is_core_stable(Partition::grand(2), UniformScheme{}, tie).stable);
  StabilityOptions exact;
  exact.mode = ComparisonMode::ExactRational;
  EXPECT_TRUE(is_strict_core_stable(Partition::singletons(2), UniformScheme{}, tie, exact).stable);
  EXPECT_TRUE(is_strict_core_stable(Partition::singletons(2), UniformScheme{}, tie).stable);
}

TEST(IndividualTest, Examples) {
  const auto t2 = make_config({5, 5, 25});
  EXPECT_TRUE(is_individually_stable(make_partition({{0, 1}, {2}}, 3), UniformScheme{}, t2).stable);
  const auto v = is_individually_stable(make_partition({{0}, {1, 2}}, 3), UniformScheme{}, t2);
  ASSERT_FALSE(v.stable);
  const auto& dev = std::get<DeviationWitness>(*v.witness);
  EXPECT_EQ(dev.player, 1);
  ASSERT_TRUE(dev.target.has_value());
  EXPECT_EQ(*dev.target, Coalition::singleton(0));
  EXPECT_TRUE(
      is_individually_stable(Partition::grand(4), CoarseOptimalScheme{}, make_config({30, 30, 30, 300})).stable);
}

TEST(IndividualTest, SingletonDeviationFlag) {
  // Player a does better alone than with b; nobody wants to join anyone.
  const auto c = make_config({25, 25});
  const auto grand = Partition::grand(2);
  EXPECT_FALSE(is_individually_stable(grand, UniformScheme{}, c).stable);
  StabilityOptions no_leave;
  no_leave.singleton_deviation = false;
  EXPECT_TRUE(is_individually_stable(grand, UniformScheme{}, c, no_leave).stable);
}

TEST(FindStableTest, Examples) {
  const auto grand_only = find_stable_partitions(make_config({5, 5, 5}), UniformScheme{}, StabilityNotion::Core);
  ASSERT_EQ(grand_only.size(), 1u);
  EXPECT_EQ(grand_only[0], Partition::grand(3));
  const auto alone = find_stable_partitions(make_config({25, 25, 25}), UniformScheme{}, StabilityNotion::Core);
  ASSERT_EQ(alone.size(), 1u);
  EXPECT_EQ(alone[0], Partition::singletons(3));
  EXPECT_EQ(find_stable_partitions(make_config({10, 10, 10}), UniformScheme{}, StabilityNotion::Core).size(), 5u);
  for (const auto notion : {StabilityNotion::Core, StabilityNotion::StrictCore, StabilityNotion::Individual}) {
    const auto t2 = find_stable_partitions(make_config({5, 5, 25}), UniformScheme{}, notion);
    ASSERT_EQ(t2.size(), 1u) << to_string(notion);
    EXPECT_EQ(t2[0], make_partition({{0, 1}, {2}}, 3));
  }
}

TEST(StabilityInputTest, CapsAndSchemes) {
  EXPECT_THROW(find_stable_partitions(make_config(std::vector<int>(14, 3)), UniformScheme{}, StabilityNotion::Core),
               CapExceeded);
  EXPECT_THROW(is_core_stable(Partition::grand(21), UniformScheme{}, make_config(std::vector<int>(21, 3))),
               CapExceeded);
  FineScheme fine;
  fine.rows[0] = {0.5, 0.5};
  fine.rows[1] = {0.5, 0.5};
  EXPECT_THROW(is_core_stable(Partition::grand(2), fine, make_config({5, 5})), ValidationError);
}

struct Instance {
  GameConfig config;
  oracle::Scheme kind;
  FederationScheme scheme;
};

Instance random_instance(std::mt19937_64& rng, std::size_t max_players) {
  std::uniform_int_distribution<std::size_t> size(2, max_players);
  std::uniform_int_distribution<int> samples(1, 40);
  std::uniform_int_distribution<int> mu(1, 30);
  std::uniform_int_distribution<int> kind(0, 3);
  std::vector<int> players(size(rng));
  for (auto& n : players) n = samples(rng);
  const double mu_e = mu(rng);
  const double sigma_sq = std::uniform_int_distribution<int>(1, 8)(rng) / 4.0;
  switch (kind(rng)) {
    case 0:
      return {make_config(players, mu_e, sigma_sq), oracle::Scheme::Local, LocalScheme{}};
    case 1:
      return {make_config(players, mu_e, sigma_sq), oracle::Scheme::Uniform, UniformScheme{}};
    case 2:
      return {make_config(players, mu_e, sigma_sq), oracle::Scheme::CoarseOptimal, CoarseOptimalScheme{}};
    default:
      return {make_config(players, mu_e, sigma_sq), oracle::Scheme::FineOptimal, FineOptimalScheme{}};
  }
}

std::vector<std::vector<PlayerIndex>> blocks_of(const Partition& p) {
  std::vector<std::vector<PlayerIndex>> out;
  for (const auto& c : p.coalitions()) out.emplace_back(c.members().begin(), c.members().end());
  return out;
}

TEST(StabilityOracleTest, AgreesWithBruteForce) {
  std::mt19937_64 rng(31);
  const std::pair<StabilityNotion, oracle::Notion> notions[] = {
      {StabilityNotion::Core, oracle::Notion::Core},
      {StabilityNotion::StrictCore, oracle::Notion::Strict},
      {StabilityNotion::Individual, oracle::Notion::Individual}};
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = random_instance(rng, 5);
    const auto err = oracle::error_fn(inst.config.players, inst.config.mu_e, inst.config.sigma_sq, inst.kind);
    for (const auto& p : enumerate_partitions(inst.config.size())) {
      for (const auto& [notion, ref] : notions) {
        const auto verdict = check_stability(p, inst.scheme, inst.config, notion);
        EXPECT_EQ(verdict.stable, oracle::is_stable(blocks_of(p), inst.config.size(), err, ref))
            << to_string(notion) << " trial " << trial;
        EXPECT_EQ(verdict.witness.has_value(), !verdict.stable);
        if (!verdict.stable) EXPECT_TRUE(verify_witness(verdict, p, inst.scheme, inst.config, notion));
      }
    }
  }
}

TEST(StabilityPropertyTest, ImplicationChain) {
  std::mt19937_64 rng(32);
  int instances = 0;
  while (instances < 500) {
    const auto inst = random_instance(rng, 6);
    for (const auto& p : enumerate_partitions(inst.config.size())) {
      if (rng() % 8 != 0) continue;
      ++instances;
      const bool core = is_core_stable(p, inst.scheme, inst.config).stable;
      const bool strict = is_strict_core_stable(p, inst.scheme, inst.config).stable;
      const bool individual = is_individually_stable(p, inst.scheme, inst.config).stable;
      if (strict) EXPECT_TRUE(core);
      if (!individual) EXPECT_FALSE(strict);
    }
  }
}

TEST(StabilityPropertyTest, ExactAndFloatAgreeOnRationalInputs) {
  std::mt19937_64 rng(33);
  StabilityOptions exact;
  exact.mode = ComparisonMode::ExactRational;
  for (int trial = 0; trial < 150; ++trial) {
    auto inst = random_instance(rng, 4);
    if (inst.kind == oracle::Scheme::FineOptimal) inst.scheme = UniformScheme{};
    if (trial % 3 == 0) {
      // Put some players exactly on the indifference boundary.
      const int boundary = std::uniform_int_distribution<int>(1, 12)(rng);
      inst.config.mu_e = boundary * inst.config.sigma_sq;
      for (auto& n : inst.config.players) {
        if (rng() % 2 == 0) n = boundary;
      }
    }
    inst.config.exact = ExactParams{to_rational(inst.config.mu_e), to_rational(inst.config.sigma_sq), std::nullopt};
    for (const auto& p : enumerate_partitions(inst.config.size())) {
      for (const auto notion : {StabilityNotion::Core, StabilityNotion::StrictCore, StabilityNotion::Individual}) {
        EXPECT_EQ(check_stability(p, inst.scheme, inst.config, notion).stable,
                  check_stability(p, inst.scheme, inst.config, notion, exact).stable);
      }
    }
  }
}

TwoSizeGame counterexample_game() { return TwoSizeGame{11, 106, 70, 7}; }
GameConfig counterexample_config() { return make_config({}, 100.0, 1.0); }

TEST(TwoSizeTest, CounterexampleInstance) {
  const auto game = counterexample_game();
  const auto c = counterexample_config();
  EXPECT_NEAR(profile_error(game, {70, 3}, PlayerType::Small, UniformScheme{}, c), 1.107322, 1e-6);
  EXPECT_NEAR(profile_error(game, {70, 0}, PlayerType::Small, UniformScheme{}, c), 1.115584, 1e-6);
  EXPECT_NEAR(profile_error(game, {0, 1}, PlayerType::Large, UniformScheme{}, c), 0.943396, 1e-6);
  EXPECT_NEAR(profile_error(game, {68, 4}, PlayerType::Large, UniformScheme{}, c), 0.943147, 1e-6);
  const Arrangement built{{70, 3}, {0, 1}, {0, 1}, {0, 1}, {0, 1}};
  const auto block = two_size_blocking_search(game, built, UniformScheme{}, c);
  ASSERT_TRUE(block.has_value());
  EXPECT_EQ(*block, (CoalitionProfile{68, 4}));
  EXPECT_EQ(to_string(*block), "π(68,4)");
  EXPECT_FALSE(two_size_individual_deviation(game, built, UniformScheme{}, c).has_value());
  Arrangement smalls_only{{70, 0}};
  for (int i = 0; i < 7; ++i) smalls_only.push_back({0, 1});
  EXPECT_TRUE(two_size_blocking_search(game, smalls_only, UniformScheme{}, c).has_value());
  EXPECT_EQ(describe_arrangement(built), "π(70,3) + 4 singletons");
}

TEST(TwoSizeTest, LargeSingletonsAreCore) {
  const TwoSizeGame game{5, 40, 0, 6};
  const Arrangement alone(6, CoalitionProfile{0, 1});
  EXPECT_FALSE(two_size_blocking_search(game, alone, UniformScheme{}, make_config({}, 10.0, 1.0)).has_value());
}

TEST(TwoSizeTest, MalformedArrangements) {
  const auto game = counterexample_game();
  EXPECT_THROW(validate_arrangement(game, Arrangement{{70, 3}}), ValidationError);
  EXPECT_THROW(validate_arrangement(game, Arrangement{{70, 7}, {0, 0}}), ValidationError);
  EXPECT_THROW(two_size_blocking_search(game, Arrangement{{70, 7}}, UniformScheme{}, counterexample_config(), {},
                                        StabilityNotion::Individual),
               ValidationError);
}

TEST(TwoSizeTest, AgreesWithLabeledSearch) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 40; ++trial) {
    const int n_s = std::uniform_int_distribution<int>(1, 9)(rng);
    const int n_l = std::uniform_int_distribution<int>(n_s + 1, 30)(rng);
    const int big_s = std::uniform_int_distribution<int>(1, 4)(rng);
    const int big_l = std::uniform_int_distribution<int>(1, 7 - big_s)(rng);
    const TwoSizeGame game{n_s, n_l, big_s, big_l};
    const auto c = make_config({}, 10.0, 1.0);
    auto labeled = c;
    labeled.players = labeled_players(game);
    Arrangement arr;
    int s_left = big_s;
    int l_left = big_l;
    while (s_left + l_left > 0) {
      const int s = std::uniform_int_distribution<int>(0, s_left)(rng);
      const int l = std::uniform_int_distribution<int>(s == 0 ? 1 : 0, std::max(l_left, s == 0 ? 1 : 0))(rng);
      if (s + l == 0 || l > l_left) continue;
      arr.push_back({s, l});
      s_left -= s;
      l_left -= l;
    }
    const auto p = expand_arrangement(game, arr);
    for (const auto notion : {StabilityNotion::Core, StabilityNotion::StrictCore}) {
      EXPECT_EQ(two_size_blocking_search(game, arr, UniformScheme{}, c, {}, notion).has_value(),
                !check_stability(p, UniformScheme{}, labeled, notion).stable);
    }
    EXPECT_EQ(two_size_individual_deviation(game, arr, UniformScheme{}, c).has_value(),
              !is_individually_stable(p, UniformScheme{}, labeled).stable);
  }
}

TEST(MonotonicityTest, SmallGrid) {
  monotonicity::Report r;
  monotonicity::run({Rational(10), Rational(1)}, 3, 8, r);
  monotonicity::run({Rational(10), Rational(1, 2)}, 6, 4, r);
  const monotonicity::Tally* all[] = {
      &r.small_gains_from_smalls, &r.large_loses_from_larges,        &r.small_gains_from_larges,
      &r.large_single_dip,        &r.coarse_small_gains_from_smalls, &r.coarse_large_gains_from_smalls,
      &r.no_joint_defection};
  for (const auto* t : all) {
    EXPECT_TRUE(t->passed()) << t->violations << "/" << t->checked << " first at " << t->first;
  }
}

}  // namespace
}  // namespace modelshare
