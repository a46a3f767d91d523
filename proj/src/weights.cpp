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

#include "modelshare/weights.hpp"

namespace modelshare {

std::vector<double> FineWeights::as_row() const {
  std::vector<double> out;
  out.reserve(row.size());
  for (const auto& [player, weight] : row) out.push_back(weight);
  return out;
}

double optimal_w(PlayerIndex j, const Coalition& c, const GameConfig& config) {
  const auto model = error_model(config);
  const auto counts = coalition_counts(c, config);
  return optimal_coarse_weight<double>(counts, c.position_of(j), model);
}

double optimal_coarse_mse(PlayerIndex j, const Coalition& c, const GameConfig& config) {
  const auto model = error_model(config);
  const auto counts = coalition_counts(c, config);
  return optimal_coarse_error<double>(counts, c.position_of(j), model);
}

FineWeights optimal_v(PlayerIndex j, const Coalition& c, const GameConfig& config) {
  const auto model = error_model(config);
  const auto counts = coalition_counts(c, config);
  const auto row = optimal_fine_row<double>(counts, c.position_of(j), model);
  FineWeights out;
  out.player = j;
  for (std::size_t k = 0; k < row.size(); ++k) out.row.emplace(c.members()[k], row[k]);
  return out;
}

double optimal_fine_mse(PlayerIndex j, const Coalition& c, const GameConfig& config) {
  const auto model = error_model(config);
  const auto counts = coalition_counts(c, config);
  return optimal_fine_error<double>(counts, c.position_of(j), model);
}

}  // namespace modelshare
