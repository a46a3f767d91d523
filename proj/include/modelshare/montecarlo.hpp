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

// Simulation oracle: draws true parameters, noise levels and samples, runs the
// estimator pipeline and reports the empirical MSE of one player's model.

#ifndef MODELSHARE_MONTECARLO_HPP
#define MODELSHARE_MONTECARLO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "modelshare/core_model.hpp"

namespace modelshare {

enum class ThetaFamily { Gaussian, Uniform, LognormalCentered };
enum class EpsilonRule { Constant, Gamma };
enum class SampleFamily { Gaussian, Uniform };

std::string to_string(ThetaFamily family);
std::string to_string(EpsilonRule rule);
std::string to_string(SampleFamily family);

/// Generating distributions. Var(theta) comes from config.sigma_sq (or the
/// per-dimension coefficient variances for regression) and E[eps] from
/// config.mu_e.
struct DistributionSpec {
  ThetaFamily theta_family = ThetaFamily::Gaussian;
  double theta_mean = 0.0;
  EpsilonRule epsilon_rule = EpsilonRule::Constant;
  double gamma_shape = 2.0;
  SampleFamily sample_family = SampleFamily::Gaussian;
  /// Regression only; empty means sigma_bias_sq / d in every dimension.
  std::vector<double> coefficient_variances;
};

void validate(const DistributionSpec& dist);

struct TrialPlan {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  /// 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
};

struct EmpiricalEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  /// Regression trials redrawn because a design matrix was rank deficient.
  std::uint64_t resamples = 0;
};

/// Weights player j puts on each member's local estimate (ordered like `c`).
/// Optimal schemes are resolved through the closed-form optimal weights.
std::vector<double> resolve_weights(const FederationScheme& scheme, PlayerIndex j, const Coalition& c,
                                    const GameConfig& config);

/// Mean estimation. `scheme` must carry explicit weights (not an optimal
/// variant); see resolve_weights.
EmpiricalEstimate empirical_mse_mean(const GameConfig& config, const Coalition& c, const FederationScheme& scheme,
                                     PlayerIndex j, const DistributionSpec& dist, const TrialPlan& plan);

/// Linear regression with standard normal inputs, evaluated at a fresh test
/// point. Requires config.linreg and n_i > d + 1 for every member.
EmpiricalEstimate empirical_mse_linreg(const GameConfig& config, const Coalition& c, const FederationScheme& scheme,
                                       PlayerIndex j, const DistributionSpec& dist, const TrialPlan& plan);

/// One case of the closed-form-vs-simulation battery.
struct BatteryCase {
  std::string name;
  GameConfig config;
  std::vector<PlayerIndex> members;
  FederationScheme scheme;
  PlayerIndex player = 0;
  DistributionSpec dist;
};

/// Twelve cases covering local, uniform, coarse and fine federation for mean
/// estimation and regression under several generating families.
std::vector<BatteryCase> standard_battery();

struct BatteryResult {
  BatteryCase spec;
  double closed_form = 0.0;
  EmpiricalEstimate empirical;
  double z_score() const;
};

/// Resolves the scheme, runs the matching simulation and pairs it with the
/// closed form.
BatteryResult run_case(const BatteryCase& spec, const TrialPlan& plan);

}  // namespace modelshare

#endif  // MODELSHARE_MONTECARLO_HPP
