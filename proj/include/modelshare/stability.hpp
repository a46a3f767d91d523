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

// Core, strict-core and individual stability of coalition structures, with
// concrete witnesses. Labeled structures are checked exhaustively (subset
// enumeration); two-size populations are checked on coalition profiles
// pi(s, l), since errors depend only on those counts.

#ifndef MODELSHARE_STABILITY_HPP
#define MODELSHARE_STABILITY_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "modelshare/core_model.hpp"

namespace modelshare {

enum class ComparisonMode { FloatEpsilon, ExactRational };
enum class StabilityNotion { Core, StrictCore, Individual };

std::string to_string(ComparisonMode mode);
std::string to_string(StabilityNotion notion);

/// Relative tolerance for float comparisons. A player strictly prefers a new
/// error e' over e when e' < e (1 - epsilon) - 1e-15, and weakly prefers it
/// when e' <= e (1 + epsilon).
struct PreferenceOrder {
  double epsilon = 1e-9;

  bool strictly_prefers(double new_error, double old_error) const;
  bool weakly_prefers(double new_error, double old_error) const;
};

struct StabilityOptions {
  PreferenceOrder order{};
  ComparisonMode mode = ComparisonMode::FloatEpsilon;
  /// Individual stability also considers leaving to a new singleton.
  bool singleton_deviation = true;
};

struct BlockingWitness {
  Coalition coalition;
};

/// `target` is the existing coalition the player joins; empty means the
/// player leaves to be alone.
struct DeviationWitness {
  PlayerIndex player = 0;
  std::optional<Coalition> target;
};

using StabilityWitness = std::variant<BlockingWitness, DeviationWitness>;

struct StabilityVerdict {
  bool stable = true;
  std::optional<StabilityWitness> witness;
  ComparisonMode mode = ComparisonMode::FloatEpsilon;
};

StabilityVerdict is_core_stable(const Partition& p, const FederationScheme& scheme, const GameConfig& config,
                                const StabilityOptions& options = {});
StabilityVerdict is_strict_core_stable(const Partition& p, const FederationScheme& scheme, const GameConfig& config,
                                       const StabilityOptions& options = {});
StabilityVerdict is_individually_stable(const Partition& p, const FederationScheme& scheme, const GameConfig& config,
                                        const StabilityOptions& options = {});
StabilityVerdict check_stability(const Partition& p, const FederationScheme& scheme, const GameConfig& config,
                                 StabilityNotion notion, const StabilityOptions& options = {});

/// Re-evaluates the witness through the error formulas and checks its
/// defining inequality. Returns true for a stable verdict without witness.
bool verify_witness(const StabilityVerdict& verdict, const Partition& p, const FederationScheme& scheme,
                    const GameConfig& config, StabilityNotion notion, const StabilityOptions& options = {});

/// Every partition (in enumeration order) satisfying `notion`; at most 13
/// players.
std::vector<Partition> find_stable_partitions(const GameConfig& config, const FederationScheme& scheme,
                                              StabilityNotion notion, const StabilityOptions& options = {});

// ---------------------------------------------------------------------------
// Two-size populations.

struct CoalitionProfile {
  int small = 0;
  int large = 0;

  int size() const { return small + large; }
  friend bool operator==(const CoalitionProfile&, const CoalitionProfile&) = default;
};

using Arrangement = std::vector<CoalitionProfile>;

enum class PlayerType { Small, Large };

/// Error of a `type` player inside a pi(s, l) coalition. Supports the local,
/// uniform, coarse-optimal and fine-optimal schemes; the player list in
/// `config` is ignored.
double profile_error(const TwoSizeGame& game, CoalitionProfile profile, PlayerType type, const FederationScheme& scheme,
                     const GameConfig& config);
Rational exact_profile_error(const TwoSizeGame& game, CoalitionProfile profile, PlayerType type,
                             const FederationScheme& scheme, const GameConfig& config);

/// Throws ValidationError unless the profiles are non-empty and sum to (S, L).
void validate_arrangement(const TwoSizeGame& game, const Arrangement& arrangement);

/// Searches profiles (largest coalition first, then most smalls) for one
/// whose members can be drawn from the arrangement so that every member
/// strictly gains (Core) or all weakly gain and one strictly (StrictCore).
std::optional<CoalitionProfile> two_size_blocking_search(const TwoSizeGame& game, const Arrangement& arrangement,
                                                         const FederationScheme& scheme, const GameConfig& config,
                                                         const StabilityOptions& options = {},
                                                         StabilityNotion notion = StabilityNotion::Core);

/// A player of `type` in arrangement[source] moves to arrangement[*target]
/// (or alone when target is empty).
struct ProfileDeviation {
  std::size_t source = 0;
  PlayerType type = PlayerType::Small;
  std::optional<std::size_t> target;
};

std::optional<ProfileDeviation> two_size_individual_deviation(const TwoSizeGame& game, const Arrangement& arrangement,
                                                              const FederationScheme& scheme, const GameConfig& config,
                                                              const StabilityOptions& options = {});

/// Labels the arrangement: smalls are players 0..S-1, larges S..S+L-1, filled
/// into coalitions in arrangement order.
Partition expand_arrangement(const TwoSizeGame& game, const Arrangement& arrangement);

/// "π(s,l)" for one profile.
std::string to_string(CoalitionProfile profile);

/// Human-readable arrangement, e.g. "π(70,3) + 4 singletons".
std::string describe_arrangement(const Arrangement& arrangement);

}  // namespace modelshare

#endif  // MODELSHARE_STABILITY_HPP
