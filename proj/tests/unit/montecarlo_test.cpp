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

#include "modelshare/montecarlo.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "modelshare/errors.hpp"

namespace modelshare {
namespace {

GameConfig make_config(std::vector<int> players, double mu_e = 10.0, double sigma_sq = 1.0) {
  GameConfig c;
  c.players = std::move(players);
  c.mu_e = mu_e;
  c.sigma_sq = sigma_sq;
  return c;
}

TrialPlan plan(std::uint64_t trials, std::uint64_t seed, unsigned threads = 2) { return {trials, seed, threads}; }

double z(const EmpiricalEstimate& e, double target) { return (e.mean - target) / e.standard_error; }

TEST(MonteCarloTest, DeterministicAcrossThreadCounts) {
  const auto c = make_config({5, 5, 25});
  const DistributionSpec dist;
  const auto one = empirical_mse_mean(c, Coalition::grand(3), UniformScheme{}, 0, dist, plan(20000, 5, 1));
  const auto many = empirical_mse_mean(c, Coalition::grand(3), UniformScheme{}, 0, dist, plan(20000, 5, 7));
  EXPECT_EQ(one.mean, many.mean);
  EXPECT_EQ(one.standard_error, many.standard_error);
  const auto again = empirical_mse_mean(c, Coalition::grand(3), UniformScheme{}, 0, dist, plan(20000, 5, 3));
  EXPECT_EQ(one.mean, again.mean);
  const auto other = empirical_mse_mean(c, Coalition::grand(3), UniformScheme{}, 0, dist, plan(20000, 6, 3));
  EXPECT_NE(one.mean, other.mean);

  auto lr = make_config({12, 20});
  lr.linreg = LinRegSpec{2, 0.5};
  const auto a = empirical_mse_linreg(lr, Coalition::grand(2), UniformScheme{}, 1, dist, plan(4000, 9, 1));
  const auto b = empirical_mse_linreg(lr, Coalition::grand(2), UniformScheme{}, 1, dist, plan(4000, 9, 5));
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.resamples, b.resamples);
}

TEST(MonteCarloTest, MeanEstimationExamples) {
  const auto t1 = make_config({5, 5, 5});
  const auto gauss = empirical_mse_mean(t1, Coalition::grand(3), UniformScheme{}, 0, {}, plan(40000, 1));
  EXPECT_LT(std::abs(z(gauss, 4.0 / 3.0)), 3.0);
  DistributionSpec flat;
  flat.theta_family = ThetaFamily::Uniform;
  flat.sample_family = SampleFamily::Uniform;
  const auto uni = empirical_mse_mean(t1, Coalition::grand(3), UniformScheme{}, 0, flat, plan(40000, 2));
  EXPECT_LT(std::abs(z(uni, 4.0 / 3.0)), 3.0);
  const auto alone =
      empirical_mse_mean(make_config({5}), Coalition::singleton(0), LocalScheme{}, 0, {}, plan(40000, 3));
  EXPECT_LT(std::abs(z(alone, 2.0)), 3.0);
  EXPECT_EQ(alone.trials, 40000u);
}

TEST(MonteCarloTest, ThetaMeanDoesNotMatter) {
  const auto c = make_config({5, 5, 25});
  DistributionSpec shifted;
  shifted.theta_mean = 50.0;
  const auto base = empirical_mse_mean(c, Coalition::grand(3), UniformScheme{}, 2, {}, plan(40000, 4));
  const auto moved = empirical_mse_mean(c, Coalition::grand(3), UniformScheme{}, 2, shifted, plan(40000, 4));
  EXPECT_LT(std::abs(base.mean - moved.mean), 3.0 * base.standard_error);
}

TEST(MonteCarloTest, StandardErrorShrinksWithTrials) {
  const auto c = make_config({5, 25});
  const auto small = empirical_mse_mean(c, Coalition::grand(2), UniformScheme{}, 0, {}, plan(10000, 8));
  const auto big = empirical_mse_mean(c, Coalition::grand(2), UniformScheme{}, 0, {}, plan(40000, 8));
  const double ratio = big.standard_error / small.standard_error;
  EXPECT_GT(ratio, 0.4);
  EXPECT_LT(ratio, 0.6);
}

TEST(MonteCarloTest, RegressionExamples) {
  auto c = make_config({30}, 10.0, 0.0);
  c.linreg = LinRegSpec{3, 1.0};
  const auto local = empirical_mse_linreg(c, Coalition::singleton(0), LocalScheme{}, 0, {}, plan(30000, 11));
  EXPECT_LT(std::abs(z(local, 30.0 / 26.0)), 3.0);

  auto tiny = make_config({5}, 10.0, 0.0);
  tiny.linreg = LinRegSpec{2, 1.0};
  const auto edge = empirical_mse_linreg(tiny, Coalition::singleton(0), LocalScheme{}, 0, {}, plan(100000, 12));
  EXPECT_LT(std::abs(z(edge, 10.0)), 3.0);

  auto pair = make_config({30, 40}, 10.0, 0.0);
  pair.linreg = LinRegSpec{3, 1.0};
  FineScheme indicator;
  indicator.rows[0] = {1.0, 0.0};
  const auto self_only = empirical_mse_linreg(pair, Coalition::grand(2), indicator, 0, {}, plan(30000, 13));
  EXPECT_LT(std::abs(z(self_only, 30.0 / 26.0)), 3.0);
}

TEST(MonteCarloTest, ResolvedWeights) {
  const auto c = make_config({30, 30, 30, 300});
  const auto uni = resolve_weights(UniformScheme{}, 3, Coalition::grand(4), c);
  EXPECT_NEAR(uni[3], 300.0 / 390.0, 1e-15);
  const auto coarse = resolve_weights(CoarseOptimalScheme{}, 0, Coalition::grand(4), c);
  double total = 0.0;
  for (const double v : coarse) total += v;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(mse_fine(0, Coalition::grand(4), coarse, c), 0.27964, 1e-5);
  EXPECT_THROW(empirical_mse_mean(c, Coalition::grand(4), CoarseOptimalScheme{}, 0, {}, plan(10, 1)), ValidationError);
}

TEST(MonteCarloTest, InvalidSpecs) {
  DistributionSpec bad;
  bad.gamma_shape = 0.0;
  bad.epsilon_rule = EpsilonRule::Gamma;
  EXPECT_THROW(validate(bad), ValidationError);
  auto c = make_config({30, 30});
  c.linreg = LinRegSpec{2, 1.0};
  DistributionSpec wrong_sum;
  wrong_sum.coefficient_variances = {0.2, 0.2};
  EXPECT_THROW(empirical_mse_linreg(c, Coalition::grand(2), UniformScheme{}, 0, wrong_sum, plan(10, 1)),
               ValidationError);
}

TEST(MonteCarloTest, BatteryShape) {
  const auto battery = standard_battery();
  EXPECT_EQ(battery.size(), 12u);
  bool local = false, uniform = false, coarse = false, fine = false;
  for (const auto& b : battery) {
    local = local || std::holds_alternative<LocalScheme>(b.scheme);
    uniform = uniform || std::holds_alternative<UniformScheme>(b.scheme);
    coarse = coarse || std::holds_alternative<CoarseOptimalScheme>(b.scheme);
    fine = fine || std::holds_alternative<FineOptimalScheme>(b.scheme);
  }
  EXPECT_TRUE(local && uniform && coarse && fine);
  const auto quick = run_case(battery[1], plan(20000, 3));
  EXPECT_LT(std::abs(quick.z_score()), 3.0);
}

}  // namespace
}  // namespace modelshare
