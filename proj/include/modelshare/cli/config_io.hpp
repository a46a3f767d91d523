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

// JSON run configuration documents.
//
//   {
//     "mu_e": 10, "sigma_sq": 1,          numbers or exact strings ("10/3")
//     "players": [5, 5, 25],
//     "scheme": "coarse", "weights": [0.5, 0.5, 0.5],
//     "linreg": {"d": 2, "sigma_bias_sq": 0.5} or {"d": 2, "variances": [...]},
//     "two_size": {"n_s": 11, "n_l": 106, "S": 70, "L": 7},
//     "mc": {"trials": 100000, "seed": 1, "theta_family": "gaussian", ...}
//   }

#ifndef MODELSHARE_CLI_CONFIG_IO_HPP
#define MODELSHARE_CLI_CONFIG_IO_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "modelshare/core_model.hpp"
#include "modelshare/montecarlo.hpp"

namespace modelshare::cli {

struct McSettings {
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  DistributionSpec dist;
};

struct RunConfigDocument {
  GameConfig config;
  FederationScheme scheme = UniformScheme{};
  std::optional<TwoSizeGame> two_size;
  McSettings mc;
};

/// Scheme by name: local, uniform, coarse, coarse-optimal, fine, fine-optimal.
/// Explicit schemes need weights (coarse: one per player; fine: rows keyed by
/// player label).
FederationScheme make_scheme(const std::string& name, const std::optional<std::string>& weights_json,
                             std::size_t player_count);

/// Parses and validates a document; unknown keys are rejected.
RunConfigDocument parse_config(const std::string& text);
RunConfigDocument load_config(const std::string& path);

}  // namespace modelshare::cli

#endif  // MODELSHARE_CLI_CONFIG_IO_HPP
