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

#include <bit>
#include <map>
#include <utility>

#include "modelshare/scheme_eval.hpp"

namespace modelshare {

std::string to_string(ComparisonMode mode) {
  return mode == ComparisonMode::ExactRational ? "exact-rational" : "float-epsilon";
}

std::string to_string(StabilityNotion notion) {
  switch (notion) {
    case StabilityNotion::Core:
      return "core";
    case StabilityNotion::StrictCore:
      return "strict";
    case StabilityNotion::Individual:
      return "individual";
  }
  return "?";
}

bool PreferenceOrder::strictly_prefers(double new_error, double old_error) const {
  return new_error < old_error * (1.0 - epsilon) - 1e-15;
}

bool PreferenceOrder::weakly_prefers(double new_error, double old_error) const {
  return new_error <= old_error * (1.0 + epsilon);
}

namespace {

template <class Real>
struct Comparator;

template <>
struct Comparator<double> {
  PreferenceOrder order;
  bool strict(double a, double b) const { return order.strictly_prefers(a, b); }
  bool weak(double a, double b) const { return order.weakly_prefers(a, b); }
};

template <>
struct Comparator<Rational> {
  bool strict(const Rational& a, const Rational& b) const { return a < b; }
  bool weak(const Rational& a, const Rational& b) const { return a <= b; }
};

template <class Real>
Comparator<Real> make_comparator(const StabilityOptions& options) {
  if constexpr (std::is_same_v<Real, double>) {
    if (!(options.order.epsilon >= 0.0)) throw ValidationError("epsilon: must be non-negative");
    return Comparator<double>{options.order};
  } else {
    return Comparator<Rational>{};
  }
}

template <class Real>
ErrorModel<Real> model_for(const GameConfig& config) {
  if constexpr (std::is_same_v<Real, double>) {
    return error_model(config);
  } else {
    return exact_error_model(config);
  }
}

template <class Real>
ErrorModel<Real> parameter_model_for(const GameConfig& config) {
  if constexpr (std::is_same_v<Real, double>) {
    return parameter_error_model(config);
  } else {
    return exact_parameter_error_model(config);
  }
}

void require_coalition_independent(const FederationScheme& scheme) {
  if (!is_coalition_independent(scheme)) {
    throw ValidationError("scheme: stability needs weights defined for every coalition (use fine-optimal)");
  }
}

std::size_t rank_in_mask(std::uint64_t mask, PlayerIndex j) {
  return static_cast<std::size_t>(std::popcount(mask & ((std::uint64_t{1} << j) - 1)));
}

// Per-coalition member errors, memoized densely for small populations.
template <class Real>
class PreferenceTable {
 public:
  static constexpr std::size_t kCacheLimit = 16;

  PreferenceTable(const GameConfig& config, const FederationScheme& scheme)
      : config_(config), scheme_(scheme), model_(model_for<Real>(config)) {
    require_coalition_independent(scheme);
    if (config.size() <= kCacheLimit) cache_.resize(std::size_t{1} << config.size());
  }

  /// Errors of the members of `mask` in increasing player order. The
  /// reference is valid until the next call.
  const std::vector<Real>& errors(std::uint64_t mask) {
    if (!cache_.empty()) {
      auto& slot = cache_[mask];
      if (!slot) slot = compute(mask);
      return *slot;
    }
    scratch_ = compute(mask);
    return scratch_;
  }

  Real error_of(PlayerIndex j, std::uint64_t mask) { return errors(mask)[rank_in_mask(mask, j)]; }

  std::size_t players() const { return config_.size(); }

 private:
  std::vector<Real> compute(std::uint64_t mask) const {
    std::vector<int> counts;
    std::vector<PlayerIndex> ids;
    for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
      const auto j = static_cast<PlayerIndex>(std::countr_zero(rest));
      ids.push_back(j);
      counts.push_back(config_.players[j]);
    }
    std::vector<Real> out;
    out.reserve(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      out.push_back(evaluate_scheme<Real>(counts, k, ids[k], scheme_, model_));
    }
    return out;
  }

  const GameConfig& config_;
  const FederationScheme& scheme_;
  ErrorModel<Real> model_;
  std::vector<std::optional<std::vector<Real>>> cache_;
  std::vector<Real> scratch_;
};

template <class Real>
std::vector<Real> current_errors(PreferenceTable<Real>& table, const Partition& p) {
  std::vector<Real> cur(p.player_count());
  for (const auto& c : p.coalitions()) {
    const auto mask = c.mask();
    const auto& errs = table.errors(mask);
    for (std::size_t k = 0; k < c.size(); ++k) cur[c.members()[k]] = errs[k];
  }
  return cur;
}

template <class Real>
StabilityVerdict check_blocking(PreferenceTable<Real>& table, const Comparator<Real>& cmp, const Partition& p,
                                bool strict_core, ComparisonMode mode) {
  const auto cur = current_errors(table, p);
  const std::uint64_t end = std::uint64_t{1} << p.player_count();
  for (std::uint64_t mask = 1; mask < end; ++mask) {
    const auto& errs = table.errors(mask);
    bool all_ok = true;
    bool any_strict = false;
    std::size_t k = 0;
    for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1, ++k) {
      const auto j = static_cast<PlayerIndex>(std::countr_zero(rest));
      if (strict_core) {
        if (!cmp.weak(errs[k], cur[j])) {
          all_ok = false;
          break;
        }
        any_strict = any_strict || cmp.strict(errs[k], cur[j]);
      } else if (!cmp.strict(errs[k], cur[j])) {
        all_ok = false;
        break;
      }
    }
    if (all_ok && (!strict_core || any_strict)) {
      return {false, BlockingWitness{Coalition::from_mask(mask)}, mode};
    }
  }
  return {true, std::nullopt, mode};
}

template <class Real>
StabilityVerdict check_individual(PreferenceTable<Real>& table, const Comparator<Real>& cmp, const Partition& p,
                                  bool singleton_deviation, ComparisonMode mode) {
  const auto cur = current_errors(table, p);
  const auto coalitions = p.coalitions();
  for (PlayerIndex i = 0; i < p.player_count(); ++i) {
    const std::size_t own = p.coalition_index_of(i);
    for (std::size_t q = 0; q < coalitions.size(); ++q) {
      if (q == own) continue;
      const auto& target = coalitions[q];
      const std::uint64_t joined = target.mask() | (std::uint64_t{1} << i);
      const std::vector<Real> errs = table.errors(joined);
      if (!cmp.strict(errs[rank_in_mask(joined, i)], cur[i])) continue;
      bool welcomed = true;
      for (const auto k : target.members()) {
        if (!cmp.weak(errs[rank_in_mask(joined, k)], cur[k])) {
          welcomed = false;
          break;
        }
      }
      if (welcomed) return {false, DeviationWitness{i, target}, mode};
    }
    if (singleton_deviation && coalitions[own].size() > 1) {
      const std::uint64_t alone = std::uint64_t{1} << i;
      if (cmp.strict(table.error_of(i, alone), cur[i])) return {false, DeviationWitness{i, std::nullopt}, mode};
    }
  }
  return {true, std::nullopt, mode};
}

void check_inputs(const Partition& p, const GameConfig& config, std::size_t cap) {
  validate(config);
  if (p.player_count() != config.size()) throw ValidationError("partition: player count does not match config");
  if (config.size() > cap) {
    throw CapExceeded("stability: " + std::to_string(config.size()) + " players exceeds the cap of " +
                      std::to_string(cap));
  }
}

template <class Real>
StabilityVerdict dispatch(PreferenceTable<Real>& table, const Partition& p, StabilityNotion notion,
                          const StabilityOptions& options) {
  const auto cmp = make_comparator<Real>(options);
  switch (notion) {
    case StabilityNotion::Core:
      return check_blocking(table, cmp, p, false, options.mode);
    case StabilityNotion::StrictCore:
      return check_blocking(table, cmp, p, true, options.mode);
    case StabilityNotion::Individual:
      return check_individual(table, cmp, p, options.singleton_deviation, options.mode);
  }
  throw ValidationError("unknown stability notion");
}

template <class Real>
bool verify_impl(const StabilityVerdict& verdict, const Partition& p, const FederationScheme& scheme,
                 const GameConfig& config, StabilityNotion notion, const StabilityOptions& options) {
  const auto model = model_for<Real>(config);
  const auto cmp = make_comparator<Real>(options);
  auto error_in = [&](PlayerIndex j, const Coalition& c) {
    const auto counts = coalition_counts(c, config);
    return evaluate_scheme<Real>(counts, c.position_of(j), j, scheme, model);
  };
  if (const auto* block = std::get_if<BlockingWitness>(&*verdict.witness)) {
    if (notion == StabilityNotion::Individual) return false;
    bool any_strict = false;
    for (const auto j : block->coalition.members()) {
      const Real now = error_in(j, block->coalition);
      const Real before = error_in(j, p.coalition_of(j));
      if (notion == StabilityNotion::Core) {
        if (!cmp.strict(now, before)) return false;
      } else {
        if (!cmp.weak(now, before)) return false;
        any_strict = any_strict || cmp.strict(now, before);
      }
    }
    return notion == StabilityNotion::Core || any_strict;
  }
  const auto& dev = std::get<DeviationWitness>(*verdict.witness);
  if (notion != StabilityNotion::Individual) return false;
  const auto& own = p.coalition_of(dev.player);
  const Real before = error_in(dev.player, own);
  if (!dev.target) {
    return own.size() > 1 && cmp.strict(error_in(dev.player, Coalition::singleton(dev.player)), before);
  }
  if (dev.target->contains(dev.player)) return false;
  std::vector<PlayerIndex> joined(dev.target->members().begin(), dev.target->members().end());
  joined.push_back(dev.player);
  const Coalition grown(std::move(joined), config.size());
  if (!cmp.strict(error_in(dev.player, grown), before)) return false;
  for (const auto k : dev.target->members()) {
    if (!cmp.weak(error_in(k, grown), error_in(k, *dev.target))) return false;
  }
  return true;
}

}  // namespace

StabilityVerdict check_stability(const Partition& p, const FederationScheme& scheme, const GameConfig& config,
                                 StabilityNotion notion, const StabilityOptions& options) {
  check_inputs(p, config, notion == StabilityNotion::Individual ? 64 : kMaxCoalitionPlayers);
  validate_scheme(scheme, p);
  if (options.mode == ComparisonMode::ExactRational) {
    PreferenceTable<Rational> table(config, scheme);
    return dispatch(table, p, notion, options);
  }
  PreferenceTable<double> table(config, scheme);
  return dispatch(table, p, notion, options);
}

StabilityVerdict is_core_stable(const Partition& p, const FederationScheme& scheme, const GameConfig& config,
                                const StabilityOptions& options) {
  return check_stability(p, scheme, config, StabilityNotion::Core, options);
}

StabilityVerdict is_strict_core_stable(const Partition& p, const FederationScheme& scheme, const GameConfig& config,
                                       const StabilityOptions& options) {
  return check_stability(p, scheme, config, StabilityNotion::StrictCore, options);
}

StabilityVerdict is_individually_stable(const Partition& p, const FederationScheme& scheme, const GameConfig& config,
                                        const StabilityOptions& options) {
  return check_stability(p, scheme, config, StabilityNotion::Individual, options);
}

bool verify_witness(const StabilityVerdict& verdict, const Partition& p, const FederationScheme& scheme,
                    const GameConfig& config, StabilityNotion notion, const StabilityOptions& options) {
  if (verdict.stable) return !verdict.witness.has_value();
  if (!verdict.witness) return false;
  if (verdict.mode == ComparisonMode::ExactRational) {
    return verify_impl<Rational>(verdict, p, scheme, config, notion, options);
  }
  return verify_impl<double>(verdict, p, scheme, config, notion, options);
}

std::vector<Partition> find_stable_partitions(const GameConfig& config, const FederationScheme& scheme,
                                              StabilityNotion notion, const StabilityOptions& options) {
  validate(config);
  if (config.size() > kMaxPartitionPlayers) {
    throw CapExceeded("find_stable_partitions: " + std::to_string(config.size()) + " players exceeds the cap of " +
                      std::to_string(kMaxPartitionPlayers));
  }
  auto run = [&](auto& table) {
    std::vector<Partition> stable;
    PartitionEnumerator it(config.size());
    while (auto p = it.next()) {
      validate_scheme(scheme, *p);
      if (dispatch(table, *p, notion, options).stable) stable.push_back(std::move(*p));
    }
    return stable;
  };
  if (options.mode == ComparisonMode::ExactRational) {
    PreferenceTable<Rational> table(config, scheme);
    return run(table);
  }
  PreferenceTable<double> table(config, scheme);
  return run(table);
}

// ---------------------------------------------------------------------------
// Two-size populations

namespace {

void require_profile_scheme(const FederationScheme& scheme) {
  if (std::holds_alternative<CoarseScheme>(scheme) || std::holds_alternative<FineScheme>(scheme)) {
    throw ValidationError("scheme: two-size analysis supports local, uniform, coarse-optimal and fine-optimal");
  }
}

void validate_two_size(const TwoSizeGame& game, const GameConfig& config) {
  validate(game);
  validate_parameters(config);
  if (config.linreg && game.n_small < config.linreg->dim + 2) {
    throw ValidationError("two_size.n_s: n must exceed d+1 for linear regression");
  }
}

template <class Real>
Real profile_error_impl(const TwoSizeGame& game, CoalitionProfile profile, PlayerType type,
                        const FederationScheme& scheme, const ErrorModel<Real>& model) {
  if (profile.small < 0 || profile.large < 0) throw ValidationError("profile: negative count");
  if (type == PlayerType::Small && profile.small < 1) throw ValidationError("profile: no small player present");
  if (type == PlayerType::Large && profile.large < 1) throw ValidationError("profile: no large player present");
  std::vector<int> counts(static_cast<std::size_t>(profile.small), game.n_small);
  counts.insert(counts.end(), static_cast<std::size_t>(profile.large), game.n_large);
  const std::size_t self = type == PlayerType::Small ? 0 : static_cast<std::size_t>(profile.small);
  return evaluate_scheme<Real>(counts, self, 0, scheme, model);
}

// Memoized profile errors for one search.
template <class Real>
class ProfileErrors {
 public:
  ProfileErrors(const TwoSizeGame& game, const FederationScheme& scheme, const GameConfig& config)
      : game_(game), scheme_(scheme), model_(parameter_model_for<Real>(config)) {}

  const Real& get(CoalitionProfile profile, PlayerType type) {
    const auto key = std::make_tuple(profile.small, profile.large, type == PlayerType::Small);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(key, profile_error_impl(game_, profile, type, scheme_, model_)).first;
    }
    return it->second;
  }

 private:
  const TwoSizeGame& game_;
  const FederationScheme& scheme_;
  ErrorModel<Real> model_;
  std::map<std::tuple<int, int, bool>, Real> cache_;
};

template <class Real>
std::optional<CoalitionProfile> blocking_search_impl(const TwoSizeGame& game, const Arrangement& arrangement,
                                                     const FederationScheme& scheme, const GameConfig& config,
                                                     const StabilityOptions& options, bool strict_core) {
  const auto cmp = make_comparator<Real>(options);
  ProfileErrors<Real> errs(game, scheme, config);
  const int total = game.small_count + game.large_count;
  for (int size = total; size >= 1; --size) {
    for (int s = std::min(size, game.small_count); s >= std::max(0, size - game.large_count); --s) {
      const CoalitionProfile candidate{s, size - s};
      int strict_small = 0;
      int weak_small = 0;
      int strict_large = 0;
      int weak_large = 0;
      for (const auto& source : arrangement) {
        if (candidate.small > 0 && source.small > 0) {
          const Real& now = errs.get(candidate, PlayerType::Small);
          const Real& before = errs.get(source, PlayerType::Small);
          if (cmp.strict(now, before)) strict_small += source.small;
          if (cmp.weak(now, before)) weak_small += source.small;
        }
        if (candidate.large > 0 && source.large > 0) {
          const Real& now = errs.get(candidate, PlayerType::Large);
          const Real& before = errs.get(source, PlayerType::Large);
          if (cmp.strict(now, before)) strict_large += source.large;
          if (cmp.weak(now, before)) weak_large += source.large;
        }
      }
      bool blocks;
      if (strict_core) {
        blocks = weak_small >= candidate.small && weak_large >= candidate.large &&
                 ((candidate.small > 0 && strict_small > 0) || (candidate.large > 0 && strict_large > 0));
      } else {
        blocks = strict_small >= candidate.small && strict_large >= candidate.large;
      }
      if (blocks) return candidate;
    }
  }
  return std::nullopt;
}

template <class Real>
std::optional<ProfileDeviation> individual_impl(const TwoSizeGame& game, const Arrangement& arrangement,
                                                const FederationScheme& scheme, const GameConfig& config,
                                                const StabilityOptions& options) {
  const auto cmp = make_comparator<Real>(options);
  ProfileErrors<Real> errs(game, scheme, config);
  for (std::size_t k = 0; k < arrangement.size(); ++k) {
    const auto source = arrangement[k];
    for (const auto type : {PlayerType::Small, PlayerType::Large}) {
      const int present = type == PlayerType::Small ? source.small : source.large;
      if (present == 0) continue;
      const Real before = errs.get(source, type);
      for (std::size_t q = 0; q < arrangement.size(); ++q) {
        if (q == k) continue;
        const auto target = arrangement[q];
        CoalitionProfile grown = target;
        (type == PlayerType::Small ? grown.small : grown.large) += 1;
        if (!cmp.strict(errs.get(grown, type), before)) continue;
        bool welcomed = true;
        if (target.small > 0 && !cmp.weak(errs.get(grown, PlayerType::Small), errs.get(target, PlayerType::Small))) {
          welcomed = false;
        }
        if (target.large > 0 && !cmp.weak(errs.get(grown, PlayerType::Large), errs.get(target, PlayerType::Large))) {
          welcomed = false;
        }
        if (welcomed) return ProfileDeviation{k, type, q};
      }
      if (options.singleton_deviation && source.size() > 1) {
        const CoalitionProfile alone = type == PlayerType::Small ? CoalitionProfile{1, 0} : CoalitionProfile{0, 1};
        if (cmp.strict(errs.get(alone, type), before)) return ProfileDeviation{k, type, std::nullopt};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

double profile_error(const TwoSizeGame& game, CoalitionProfile profile, PlayerType type, const FederationScheme& scheme,
                     const GameConfig& config) {
  validate_two_size(game, config);
  require_profile_scheme(scheme);
  return profile_error_impl<double>(game, profile, type, scheme, parameter_error_model(config));
}

Rational exact_profile_error(const TwoSizeGame& game, CoalitionProfile profile, PlayerType type,
                             const FederationScheme& scheme, const GameConfig& config) {
  validate_two_size(game, config);
  require_profile_scheme(scheme);
  return profile_error_impl<Rational>(game, profile, type, scheme, exact_parameter_error_model(config));
}

void validate_arrangement(const TwoSizeGame& game, const Arrangement& arrangement) {
  validate(game);
  int smalls = 0;
  int larges = 0;
  for (const auto& profile : arrangement) {
    if (profile.small < 0 || profile.large < 0) throw ValidationError("arrangement: negative count");
    if (profile.size() == 0) throw ValidationError("arrangement: empty coalition profile");
    smalls += profile.small;
    larges += profile.large;
  }
  if (smalls != game.small_count || larges != game.large_count) {
    throw ValidationError("arrangement: profiles must sum to (S, L)");
  }
}

std::optional<CoalitionProfile> two_size_blocking_search(const TwoSizeGame& game, const Arrangement& arrangement,
                                                         const FederationScheme& scheme, const GameConfig& config,
                                                         const StabilityOptions& options, StabilityNotion notion) {
  validate_two_size(game, config);
  validate_arrangement(game, arrangement);
  require_profile_scheme(scheme);
  if (notion == StabilityNotion::Individual) {
    throw ValidationError("two_size_blocking_search: use two_size_individual_deviation for individual stability");
  }
  const bool strict_core = notion == StabilityNotion::StrictCore;
  if (options.mode == ComparisonMode::ExactRational) {
    return blocking_search_impl<Rational>(game, arrangement, scheme, config, options, strict_core);
  }
  return blocking_search_impl<double>(game, arrangement, scheme, config, options, strict_core);
}

std::optional<ProfileDeviation> two_size_individual_deviation(const TwoSizeGame& game, const Arrangement& arrangement,
                                                              const FederationScheme& scheme, const GameConfig& config,
                                                              const StabilityOptions& options) {
  validate_two_size(game, config);
  validate_arrangement(game, arrangement);
  require_profile_scheme(scheme);
  if (options.mode == ComparisonMode::ExactRational) {
    return individual_impl<Rational>(game, arrangement, scheme, config, options);
  }
  return individual_impl<double>(game, arrangement, scheme, config, options);
}

Partition expand_arrangement(const TwoSizeGame& game, const Arrangement& arrangement) {
  validate_arrangement(game, arrangement);
  const auto player_count = static_cast<std::size_t>(game.small_count + game.large_count);
  PlayerIndex next_small = 0;
  auto next_large = static_cast<PlayerIndex>(game.small_count);
  std::vector<Coalition> parts;
  for (const auto& profile : arrangement) {
    std::vector<PlayerIndex> members;
    for (int i = 0; i < profile.small; ++i) members.push_back(next_small++);
    for (int i = 0; i < profile.large; ++i) members.push_back(next_large++);
    parts.emplace_back(std::move(members), player_count);
  }
  return Partition(std::move(parts), player_count);
}

std::string to_string(CoalitionProfile profile) {
  return "π(" + std::to_string(profile.small) + "," + std::to_string(profile.large) + ")";
}

std::string describe_arrangement(const Arrangement& arrangement) {
  std::string out;
  int singletons = 0;
  for (const auto& profile : arrangement) {
    if (profile.size() == 1) {
      ++singletons;
      continue;
    }
    if (!out.empty()) out += " + ";
    out += to_string(profile);
  }
  if (singletons > 0) {
    if (!out.empty()) out += " + ";
    out += std::to_string(singletons) + (singletons == 1 ? " singleton" : " singletons");
  }
  return out;
}

}  // namespace modelshare
