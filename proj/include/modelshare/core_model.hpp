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

// Domain types shared by every module: the population of players, coalitions,
// coalition structures (partitions), federation schemes and the symmetric
// two-size population. Also hosts the partition/coalition enumerators.

#ifndef MODELSHARE_CORE_MODEL_HPP
#define MODELSHARE_CORE_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "modelshare/rational.hpp"

namespace modelshare {

using PlayerIndex = std::size_t;

/// Raised when an input violates a documented invariant. The message names
/// the offending field.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an exhaustive search is asked to run beyond its size cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Linear-regression task with zero-mean multivariate normal inputs.
/// `sigma_bias_sq` is the aggregate bias coefficient sum_d E[(x^d)^2] var_d.
struct LinRegSpec {
  int dim = 1;
  double sigma_bias_sq = 0.0;
};

/// Exact values of the distribution parameters, used by the rational
/// comparison mode when the user supplies them as fractions.
struct ExactParams {
  Rational mu_e;
  Rational sigma_sq;
  std::optional<Rational> sigma_bias_sq;
};

struct GameConfig {
  std::vector<int> players;  // sample count n_i of each player
  double mu_e = 1.0;         // E[eps_i], expected sampling-noise variance
  double sigma_sq = 0.0;     // Var(theta_i) across players
  std::optional<LinRegSpec> linreg;
  std::optional<ExactParams> exact;

  std::size_t size() const { return players.size(); }
};

/// Throws ValidationError unless every GameConfig invariant holds.
void validate(const GameConfig& config);

/// Checks mu_e, sigma_sq and the linreg/exact parameters only, leaving the
/// player list alone (two-size games supply their own population).
void validate_parameters(const GameConfig& config);

/// A non-empty, sorted, duplicate-free set of player indices.
class Coalition {
 public:
  /// Sorts and checks the members; throws ValidationError when empty,
  /// duplicated, or out of range for `player_count`.
  Coalition(std::vector<PlayerIndex> members, std::size_t player_count);

  /// Members are the set bits of `mask`; mask must be non-zero.
  static Coalition from_mask(std::uint64_t mask);

  static Coalition grand(std::size_t player_count);
  static Coalition singleton(PlayerIndex player);

  std::span<const PlayerIndex> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(PlayerIndex player) const;
  /// Position of `player` among the sorted members; throws if absent.
  std::size_t position_of(PlayerIndex player) const;
  /// Bit set of members; throws CapExceeded for indices >= 64.
  std::uint64_t mask() const;

  friend bool operator==(const Coalition&, const Coalition&) = default;
  friend auto operator<=>(const Coalition&, const Coalition&) = default;

 private:
  Coalition() = default;
  std::vector<PlayerIndex> members_;
};

/// Disjoint cover of {0..m-1}. Coalitions are kept sorted by smallest member.
class Partition {
 public:
  Partition(std::vector<Coalition> coalitions, std::size_t player_count);

  static Partition grand(std::size_t player_count);
  static Partition singletons(std::size_t player_count);
  /// Builds the partition described by a restricted growth string.
  static Partition from_labels(std::span<const int> labels);

  std::span<const Coalition> coalitions() const { return coalitions_; }
  std::size_t player_count() const { return player_count_; }
  const Coalition& coalition_of(PlayerIndex player) const;
  std::size_t coalition_index_of(PlayerIndex player) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<Coalition> coalitions_;
  std::vector<std::size_t> owner_;
  std::size_t player_count_ = 0;
};

inline constexpr std::size_t kMaxPartitionPlayers = 13;
inline constexpr std::size_t kMaxCoalitionPlayers = 20;

/// Streams every set partition of {0..m-1} exactly once, in restricted growth
/// string order (the grand coalition first, all singletons last).
class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(std::size_t player_count);

  /// Writes the next partition into `out`; returns false when exhausted.
  bool next(Partition& out);
  std::optional<Partition> next();

 private:
  bool advance();

  std::vector<int> labels_;
  std::vector<int> prefix_max_;
  bool started_ = false;
  bool done_ = false;
};

/// All partitions of {0..m-1}; m must be in [1, 13].
std::vector<Partition> enumerate_partitions(std::size_t player_count);

/// All 2^m - 1 non-empty subsets in increasing bit-mask order; m in [1, 20].
std::vector<Coalition> enumerate_coalitions(std::size_t player_count);

std::uint64_t bell_number(std::size_t n);

// Federation schemes. Coarse weights are indexed by global player index;
// fine rows are keyed by player and ordered like that player's coalition.
struct LocalScheme {};
struct UniformScheme {};
struct CoarseScheme {
  std::vector<double> weights;
};
struct CoarseOptimalScheme {};
struct FineScheme {
  std::map<PlayerIndex, std::vector<double>> rows;
};
struct FineOptimalScheme {};

using FederationScheme =
    std::variant<LocalScheme, UniformScheme, CoarseScheme, CoarseOptimalScheme, FineScheme, FineOptimalScheme>;

std::string scheme_name(const FederationScheme& scheme);

/// Throws ValidationError if coarse weights leave [0,1], are not one per
/// player, or if a fine row has the wrong length or does not sum to 1.
void validate_scheme(const FederationScheme& scheme, const Partition& partition);

/// True for schemes whose per-player error is defined for any coalition.
bool is_coalition_independent(const FederationScheme& scheme);

/// Symmetric population of S "small" players with n_s samples and L "large"
/// players with n_l samples.
struct TwoSizeGame {
  int n_small = 1;
  int n_large = 2;
  int small_count = 0;
  int large_count = 0;
};

void validate(const TwoSizeGame& game);

/// The labeled population of a two-size game: smalls first, then larges.
std::vector<int> labeled_players(const TwoSizeGame& game);

/// Sample-count-vs-threshold comparison: sign of n*sigma_sq - mu_e, exact when
/// the config carries exact parameters, otherwise with a 1e-12 relative band.
/// sigma_sq == 0 means the threshold is infinite (always -1).
int compare_to_threshold(int n, const GameConfig& config);

}  // namespace modelshare

#endif  // MODELSHARE_CORE_MODEL_HPP
