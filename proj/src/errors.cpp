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

#include "modelshare/errors.hpp"

#include "modelshare/scheme_eval.hpp"

namespace modelshare {

ErrorModel<double> parameter_error_model(const GameConfig& config) {
  validate_parameters(config);
  if (config.linreg) return {config.mu_e, config.linreg->sigma_bias_sq, config.linreg->dim};
  return {config.mu_e, config.sigma_sq, 0};
}

ErrorModel<Rational> exact_parameter_error_model(const GameConfig& config) {
  validate_parameters(config);
  const Rational mu_e = config.exact ? config.exact->mu_e : to_rational(config.mu_e);
  if (config.linreg) {
    const Rational bias = config.exact && config.exact->sigma_bias_sq ? *config.exact->sigma_bias_sq
                                                                      : to_rational(config.linreg->sigma_bias_sq);
    return {mu_e, bias, config.linreg->dim};
  }
  const Rational bias = config.exact ? config.exact->sigma_sq : to_rational(config.sigma_sq);
  return {mu_e, bias, 0};
}

ErrorModel<double> error_model(const GameConfig& config) {
  validate(config);
  return parameter_error_model(config);
}

ErrorModel<Rational> exact_error_model(const GameConfig& config) {
  validate(config);
  return exact_parameter_error_model(config);
}

std::vector<int> coalition_counts(const Coalition& c, const GameConfig& config) {
  std::vector<int> counts;
  counts.reserve(c.size());
  for (const auto p : c.members()) {
    if (p >= config.size()) throw ValidationError("coalition member " + std::to_string(p) + " out of range");
    counts.push_back(config.players[p]);
  }
  return counts;
}

double mse_local(PlayerIndex j, const GameConfig& config) {
  const auto model = error_model(config);
  if (j >= config.size()) throw ValidationError("player " + std::to_string(j) + " out of range");
  return local_error(config.players[j], model);
}

double mse_uniform(PlayerIndex j, const Coalition& c, const GameConfig& config) {
  const auto model = error_model(config);
  const auto counts = coalition_counts(c, config);
  return uniform_error(std::span<const int>(counts), c.position_of(j), model);
}

double mse_coarse(PlayerIndex j, const Coalition& c, double w, const GameConfig& config) {
  const auto model = error_model(config);
  const auto counts = coalition_counts(c, config);
  return coarse_error(std::span<const int>(counts), c.position_of(j), w, model);
}

double mse_fine(PlayerIndex j, const Coalition& c, std::span<const double> v_row, const GameConfig& config) {
  const auto model = error_model(config);
  const auto counts = coalition_counts(c, config);
  return fine_error<double>(counts, c.position_of(j), v_row, model);
}

double mse_linreg(PlayerIndex j, const Coalition& c, const FederationScheme& scheme, const GameConfig& config) {
  if (!config.linreg) throw ValidationError("linreg: missing linear-regression spec");
  if (std::holds_alternative<CoarseOptimalScheme>(scheme) || std::holds_alternative<FineOptimalScheme>(scheme)) {
    throw ValidationError("scheme: mse_linreg needs explicit weights");
  }
  return scheme_error(j, c, scheme, config);
}

double scheme_error(PlayerIndex j, const Coalition& c, const FederationScheme& scheme, const GameConfig& config) {
  const auto model = error_model(config);
  const auto counts = coalition_counts(c, config);
  return evaluate_scheme<double>(counts, c.position_of(j), j, scheme, model);
}

ErrorReport player_errors(const Partition& p, const FederationScheme& scheme, const GameConfig& config) {
  validate(config);
  if (p.player_count() != config.size()) throw ValidationError("partition: player count does not match config");
  validate_scheme(scheme, p);
  ErrorReport report;
  report.errors.resize(config.size());
  for (PlayerIndex j = 0; j < config.size(); ++j) {
    report.errors[j] = scheme_error(j, p.coalition_of(j), scheme, config);
  }
  return report;
}

}  // namespace modelshare
