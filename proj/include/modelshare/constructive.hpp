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

// Constructive stable arrangements and regime classifiers for equal-size and
// two-size populations.

#ifndef MODELSHARE_CONSTRUCTIVE_HPP
#define MODELSHARE_CONSTRUCTIVE_HPP

#include <string>
#include <vector>

#include "modelshare/stability.hpp"

namespace modelshare {

enum class Regime { AllSmall, AllLarge, Boundary, Mixed };

std::string to_string(Regime regime);

/// Which structures are guaranteed to satisfy `notion`. Equal-sample
/// classifications fill `partitions`; two-size ones fill `arrangements`.
/// `all_partitions` marks the indifference case where every structure
/// qualifies (the list is left empty above the enumeration cap).
struct RegimeClassification {
  Regime regime = Regime::AllSmall;
  StabilityNotion notion = StabilityNotion::Core;
  std::vector<Partition> partitions;
  std::vector<Arrangement> arrangements;
  bool unique = false;
  bool all_partitions = false;
  std::string note;
};

/// m players with n samples each under uniform or optimal coarse federation.
RegimeClassification classify_equal_samples(int n, std::size_t m, const GameConfig& config,
                                            const FederationScheme& scheme);

/// Individually stable arrangement under uniform federation. Requires
/// n_l > mu_e/sigma^2 >= n_s and S >= 1.
Arrangement construct_individually_stable_uniform(const TwoSizeGame& game, const GameConfig& config,
                                                  const StabilityOptions& options = {});

/// Strictly core stable arrangement under optimal coarse federation.
/// Requires S >= 1 and L >= 1.
Arrangement construct_strict_core_coarse(const TwoSizeGame& game, const GameConfig& config,
                                         const StabilityOptions& options = {});

/// Uniform-federation guarantees for a two-size population.
RegimeClassification regime_predicates(const TwoSizeGame& game, const GameConfig& config,
                                       const StabilityOptions& options = {});

}  // namespace modelshare

#endif  // MODELSHARE_CONSTRUCTIVE_HPP
