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

#include "modelshare/constructive.hpp"

namespace modelshare {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::AllSmall:
      return "all-small";
    case Regime::AllLarge:
      return "all-large";
    case Regime::Boundary:
      return "boundary";
    case Regime::Mixed:
      return "mixed";
  }
  return "?";
}

namespace {

// Preference between two profile errors in the configured comparison mode.
class ProfileJudge {
 public:
  ProfileJudge(const TwoSizeGame& game, const GameConfig& config, const FederationScheme& scheme,
               const StabilityOptions& options)
      : game_(game), config_(config), scheme_(scheme), options_(options) {}

  bool strictly_prefers(CoalitionProfile now, CoalitionProfile before, PlayerType type) const {
    if (options_.mode == ComparisonMode::ExactRational) return exact(now, type) < exact(before, type);
    return options_.order.strictly_prefers(approx(now, type), approx(before, type));
  }

  bool weakly_prefers(CoalitionProfile now, CoalitionProfile before, PlayerType type) const {
    if (options_.mode == ComparisonMode::ExactRational) return exact(now, type) <= exact(before, type);
    return options_.order.weakly_prefers(approx(now, type), approx(before, type));
  }

 private:
  double approx(CoalitionProfile p, PlayerType type) const { return profile_error(game_, p, type, scheme_, config_); }
  Rational exact(CoalitionProfile p, PlayerType type) const {
    return exact_profile_error(game_, p, type, scheme_, config_);
  }

  const TwoSizeGame& game_;
  const GameConfig& config_;
  const FederationScheme& scheme_;
  const StabilityOptions& options_;
};

Arrangement with_singletons(CoalitionProfile head, int large_singletons) {
  Arrangement out;
  if (head.size() > 0) out.push_back(head);
  for (int i = 0; i < large_singletons; ++i) out.push_back({0, 1});
  return out;
}

Arrangement all_singletons(const TwoSizeGame& game) {
  Arrangement out(static_cast<std::size_t>(game.small_count), CoalitionProfile{1, 0});
  out.insert(out.end(), static_cast<std::size_t>(game.large_count), CoalitionProfile{0, 1});
  return out;
}

// Everyone shares one sample size: only the threshold comparison matters.
RegimeClassification classify_homogeneous(int sign, const TwoSizeGame& game) {
  RegimeClassification out;
  const Arrangement grand{{game.small_count, game.large_count}};
  if (sign < 0) {
    out.regime = Regime::AllSmall;
    out.arrangements = {grand};
    out.unique = true;
    out.note = "sample count below the threshold: only the grand coalition is core stable";
  } else if (sign > 0) {
    out.regime = Regime::AllLarge;
    out.arrangements = {all_singletons(game)};
    out.unique = true;
    out.note = "sample count above the threshold: only all-singletons is core stable";
  } else {
    out.regime = Regime::Boundary;
    out.all_partitions = true;
    out.arrangements = {grand, all_singletons(game)};
    out.note = "sample count equals the threshold: every arrangement is core stable";
  }
  return out;
}

}  // namespace

RegimeClassification classify_equal_samples(int n, std::size_t m, const GameConfig& config,
                                            const FederationScheme& scheme) {
  if (m < 1) throw ValidationError("m: must be >= 1");
  if (n < 1) throw ValidationError("n: must be >= 1");
  validate_parameters(config);
  const bool coarse = std::holds_alternative<CoarseOptimalScheme>(scheme);
  if (!coarse && !std::holds_alternative<UniformScheme>(scheme)) {
    throw ValidationError("scheme: equal-sample classification supports uniform and coarse-optimal");
  }
  const int sign = compare_to_threshold(n, config);
  RegimeClassification out;
  out.regime = sign < 0 ? Regime::AllSmall : (sign > 0 ? Regime::AllLarge : Regime::Boundary);
  if (coarse) {
    out.partitions = {Partition::grand(m)};
    out.unique = true;
    out.note = "optimal coarse federation: the grand coalition is the only core-stable partition";
    return out;
  }
  if (sign < 0) {
    out.partitions = {Partition::grand(m)};
    out.unique = true;
    out.note = "n below mu_e/sigma^2: the grand coalition is the only core-stable partition";
  } else if (sign > 0) {
    out.partitions = {Partition::singletons(m)};
    out.unique = true;
    out.note = "n above mu_e/sigma^2: all-singletons is the only core-stable partition";
  } else {
    out.all_partitions = true;
    if (m <= kMaxPartitionPlayers) out.partitions = enumerate_partitions(m);
    out.unique = m == 1;
    out.note = "n equals mu_e/sigma^2: every partition is core stable";
  }
  return out;
}

Arrangement construct_individually_stable_uniform(const TwoSizeGame& game, const GameConfig& config,
                                                  const StabilityOptions& options) {
  validate(game);
  validate_parameters(config);
  if (game.small_count < 1) throw ValidationError("two_size.S: must be >= 1");
  if (compare_to_threshold(game.n_large, config) <= 0) {
    throw ValidationError("two_size.n_l: must exceed mu_e/sigma^2");
  }
  if (compare_to_threshold(game.n_small, config) > 0) {
    throw ValidationError("two_size.n_s: must not exceed mu_e/sigma^2");
  }
  const int big_s = game.small_count;
  const int big_l = game.large_count;
  if (big_l == 0) return {{big_s, 0}};

  const FederationScheme scheme = UniformScheme{};
  const ProfileJudge judge(game, config, scheme, options);
  int ell = 0;
  for (int l = big_l; l >= 1; --l) {
    if (judge.weakly_prefers({big_s, l}, {0, 1}, PlayerType::Large)) {
      ell = l;
      break;
    }
  }
  if (ell == 0 || judge.strictly_prefers({big_s, 0}, {big_s, ell}, PlayerType::Small)) {
    return with_singletons({big_s, 0}, big_l);
  }
  return with_singletons({big_s, ell}, big_l - ell);
}

Arrangement construct_strict_core_coarse(const TwoSizeGame& game, const GameConfig& config,
                                         const StabilityOptions& options) {
  validate(game);
  validate_parameters(config);
  if (game.small_count < 1) throw ValidationError("two_size.S: must be >= 1");
  if (game.large_count < 1) throw ValidationError("two_size.L: must be >= 1");
  const FederationScheme scheme = CoarseOptimalScheme{};
  const ProfileJudge judge(game, config, scheme, options);
  const CoalitionProfile grand{game.small_count, game.large_count};
  const CoalitionProfile smalls{game.small_count, 0};
  if (judge.weakly_prefers(smalls, grand, PlayerType::Small)) return {smalls, {0, game.large_count}};
  return {grand};
}

RegimeClassification regime_predicates(const TwoSizeGame& game, const GameConfig& config,
                                       const StabilityOptions& options) {
  validate(game);
  validate_parameters(config);
  const int small_sign = compare_to_threshold(game.n_small, config);
  const int large_sign = compare_to_threshold(game.n_large, config);
  if (game.large_count == 0) return classify_homogeneous(small_sign, game);
  if (game.small_count == 0) return classify_homogeneous(large_sign, game);

  RegimeClassification out;
  if (small_sign > 0) {
    out.regime = Regime::AllLarge;
    out.arrangements = {all_singletons(game)};
    out.unique = true;
    out.note = "both sizes above the threshold: only all-singletons is core stable";
  } else if (large_sign <= 0) {
    out.regime = large_sign < 0 ? Regime::AllSmall : Regime::Boundary;
    out.arrangements = {{{game.small_count, game.large_count}}};
    out.note = large_sign < 0 ? "both sizes below the threshold: the grand coalition is core stable"
                              : "n_l on the threshold, n_s below: the grand coalition is core stable";
  } else if (small_sign == 0) {
    out.regime = Regime::Boundary;
    out.arrangements = {with_singletons({game.small_count, 0}, game.large_count), all_singletons(game)};
    out.note = "n_s on the threshold: any arrangement with large players alone is core stable";
  } else {
    out.regime = Regime::Mixed;
    out.notion = StabilityNotion::Individual;
    out.arrangements = {construct_individually_stable_uniform(game, config, options)};
    out.note = "n_s below and n_l above the threshold: individually stable arrangement, core not guaranteed";
  }
  return out;
}

}  // namespace modelshare
