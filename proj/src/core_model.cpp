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

#include "modelshare/core_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace modelshare {

void validate_parameters(const GameConfig& config) {
  if (!std::isfinite(config.mu_e) || config.mu_e <= 0.0) throw ValidationError("mu_e: must be positive");
  if (!std::isfinite(config.sigma_sq) || config.sigma_sq < 0.0) {
    throw ValidationError("sigma_sq: must be non-negative");
  }
  if (config.linreg) {
    const auto& lr = *config.linreg;
    if (lr.dim < 1) throw ValidationError("linreg.d: must be >= 1");
    if (!std::isfinite(lr.sigma_bias_sq) || lr.sigma_bias_sq < 0.0) {
      throw ValidationError("linreg.sigma_bias_sq: must be non-negative");
    }
  }
  if (config.exact) {
    if (config.exact->mu_e <= 0) throw ValidationError("mu_e: exact value must be positive");
    if (config.exact->sigma_sq < 0) throw ValidationError("sigma_sq: exact value must be non-negative");
    if (config.exact->sigma_bias_sq && *config.exact->sigma_bias_sq < 0) {
      throw ValidationError("linreg.sigma_bias_sq: exact value must be non-negative");
    }
  }
}

void validate(const GameConfig& config) {
  if (config.players.empty()) throw ValidationError("players: empty population");
  for (std::size_t i = 0; i < config.players.size(); ++i) {
    if (config.players[i] < 1) {
      throw ValidationError("players[" + std::to_string(i) + "]: sample count must be >= 1");
    }
  }
  validate_parameters(config);
  if (config.linreg) {
    for (std::size_t i = 0; i < config.players.size(); ++i) {
      if (config.players[i] < config.linreg->dim + 2) {
        throw ValidationError("players[" + std::to_string(i) + "]: n must exceed d+1 for linear regression");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Coalition

Coalition::Coalition(std::vector<PlayerIndex> members, std::size_t player_count) : members_(std::move(members)) {
  if (members_.empty()) throw ValidationError("coalition: must be non-empty");
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw ValidationError("coalition: duplicate player");
  }
  if (members_.back() >= player_count) {
    throw ValidationError("coalition: player index " + std::to_string(members_.back()) + " out of range");
  }
}

Coalition Coalition::from_mask(std::uint64_t mask) {
  if (mask == 0) throw ValidationError("coalition: must be non-empty");
  Coalition c;
  c.members_.reserve(static_cast<std::size_t>(std::popcount(mask)));
  while (mask != 0) {
    c.members_.push_back(static_cast<PlayerIndex>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return c;
}

Coalition Coalition::grand(std::size_t player_count) {
  std::vector<PlayerIndex> all(player_count);
  std::iota(all.begin(), all.end(), PlayerIndex{0});
  return Coalition(std::move(all), player_count);
}

Coalition Coalition::singleton(PlayerIndex player) {
  Coalition c;
  c.members_.push_back(player);
  return c;
}

bool Coalition::contains(PlayerIndex player) const {
  return std::binary_search(members_.begin(), members_.end(), player);
}

std::size_t Coalition::position_of(PlayerIndex player) const {
  const auto it = std::lower_bound(members_.begin(), members_.end(), player);
  if (it == members_.end() || *it != player) {
    throw ValidationError("player " + std::to_string(player) + " is not a member of the coalition");
  }
  return static_cast<std::size_t>(it - members_.begin());
}

std::uint64_t Coalition::mask() const {
  std::uint64_t mask = 0;
  for (const auto p : members_) {
    if (p >= 64) throw CapExceeded("coalition mask: player index beyond 63");
    mask |= std::uint64_t{1} << p;
  }
  return mask;
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<Coalition> coalitions, std::size_t player_count)
    : coalitions_(std::move(coalitions)), owner_(player_count, player_count), player_count_(player_count) {
  if (player_count == 0) throw ValidationError("partition: empty population");
  std::sort(coalitions_.begin(), coalitions_.end(),
            [](const Coalition& a, const Coalition& b) { return a.members().front() < b.members().front(); });
  for (std::size_t k = 0; k < coalitions_.size(); ++k) {
    for (const auto p : coalitions_[k].members()) {
      if (p >= player_count) throw ValidationError("partition: player index out of range");
      if (owner_[p] != player_count) {
        throw ValidationError("partition: player " + std::to_string(p) + " appears in two coalitions");
      }
      owner_[p] = k;
    }
  }
  for (std::size_t p = 0; p < player_count; ++p) {
    if (owner_[p] == player_count) {
      throw ValidationError("partition: player " + std::to_string(p) + " is not covered");
    }
  }
}

Partition Partition::grand(std::size_t player_count) {
  return Partition({Coalition::grand(player_count)}, player_count);
}

Partition Partition::singletons(std::size_t player_count) {
  std::vector<Coalition> parts;
  parts.reserve(player_count);
  for (std::size_t p = 0; p < player_count; ++p) parts.push_back(Coalition::singleton(p));
  return Partition(std::move(parts), player_count);
}

Partition Partition::from_labels(std::span<const int> labels) {
  if (labels.empty()) throw ValidationError("partition: empty population");
  const int blocks = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<PlayerIndex>> members(static_cast<std::size_t>(blocks));
  for (std::size_t p = 0; p < labels.size(); ++p) {
    if (labels[p] < 0) throw ValidationError("partition: negative block label");
    members[static_cast<std::size_t>(labels[p])].push_back(p);
  }
  std::vector<Coalition> parts;
  parts.reserve(members.size());
  for (auto& m : members) {
    if (!m.empty()) parts.emplace_back(std::move(m), labels.size());
  }
  return Partition(std::move(parts), labels.size());
}

const Coalition& Partition::coalition_of(PlayerIndex player) const { return coalitions_[coalition_index_of(player)]; }

std::size_t Partition::coalition_index_of(PlayerIndex player) const {
  if (player >= player_count_) throw ValidationError("player " + std::to_string(player) + " out of range");
  return owner_[player];
}

// ---------------------------------------------------------------------------
// Enumeration

PartitionEnumerator::PartitionEnumerator(std::size_t player_count)
    : labels_(player_count, 0), prefix_max_(player_count, 0) {
  if (player_count < 1) throw ValidationError("enumerate_partitions: need at least one player");
  if (player_count > kMaxPartitionPlayers) {
    throw CapExceeded("enumerate_partitions: " + std::to_string(player_count) + " players exceeds the cap of " +
                      std::to_string(kMaxPartitionPlayers));
  }
}

// labels_[i] <= 1 + max(labels_[0..i-1]) with labels_[0] = 0. prefix_max_[i]
// holds max(labels_[0..i]).
bool PartitionEnumerator::advance() {
  const std::size_t m = labels_.size();
  for (std::size_t i = m; i-- > 1;) {
    if (labels_[i] <= prefix_max_[i - 1]) {
      ++labels_[i];
      prefix_max_[i] = std::max(prefix_max_[i - 1], labels_[i]);
      for (std::size_t k = i + 1; k < m; ++k) {
        labels_[k] = 0;
        prefix_max_[k] = prefix_max_[i];
      }
      return true;
    }
  }
  return false;
}

bool PartitionEnumerator::next(Partition& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
  } else if (!advance()) {
    done_ = true;
    return false;
  }
  out = Partition::from_labels(labels_);
  return true;
}

std::optional<Partition> PartitionEnumerator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
  } else if (!advance()) {
    done_ = true;
    return std::nullopt;
  }
  return Partition::from_labels(labels_);
}

std::vector<Partition> enumerate_partitions(std::size_t player_count) {
  PartitionEnumerator it(player_count);
  std::vector<Partition> all;
  while (auto p = it.next()) all.push_back(std::move(*p));
  return all;
}

std::vector<Coalition> enumerate_coalitions(std::size_t player_count) {
  if (player_count < 1) throw ValidationError("enumerate_coalitions: need at least one player");
  if (player_count > kMaxCoalitionPlayers) {
    throw CapExceeded("enumerate_coalitions: " + std::to_string(player_count) + " players exceeds the cap of " +
                      std::to_string(kMaxCoalitionPlayers));
  }
  const std::uint64_t end = std::uint64_t{1} << player_count;
  std::vector<Coalition> all;
  all.reserve(end - 1);
  for (std::uint64_t mask = 1; mask < end; ++mask) all.push_back(Coalition::from_mask(mask));
  return all;
}

std::uint64_t bell_number(std::size_t n) {
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (const auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

// ---------------------------------------------------------------------------
// Schemes

std::string scheme_name(const FederationScheme& scheme) {
  struct Visitor {
    std::string operator()(const LocalScheme&) const { return "local"; }
    std::string operator()(const UniformScheme&) const { return "uniform"; }
    std::string operator()(const CoarseScheme&) const { return "coarse"; }
    std::string operator()(const CoarseOptimalScheme&) const { return "coarse-optimal"; }
    std::string operator()(const FineScheme&) const { return "fine"; }
    std::string operator()(const FineOptimalScheme&) const { return "fine-optimal"; }
  };
  return std::visit(Visitor{}, scheme);
}

void validate_scheme(const FederationScheme& scheme, const Partition& partition) {
  if (const auto* coarse = std::get_if<CoarseScheme>(&scheme)) {
    if (coarse->weights.size() != partition.player_count()) {
      throw ValidationError("scheme.weights: expected one coarse weight per player");
    }
    for (std::size_t i = 0; i < coarse->weights.size(); ++i) {
      const double w = coarse->weights[i];
      if (!(w >= 0.0 && w <= 1.0)) {
        throw ValidationError("scheme.weights[" + std::to_string(i) + "]: coarse weight outside [0,1]");
      }
    }
  } else if (const auto* fine = std::get_if<FineScheme>(&scheme)) {
    for (PlayerIndex p = 0; p < partition.player_count(); ++p) {
      const auto it = fine->rows.find(p);
      if (it == fine->rows.end()) {
        throw ValidationError("scheme.weights: missing fine row for player " + std::to_string(p));
      }
      const auto& row = it->second;
      if (row.size() != partition.coalition_of(p).size()) {
        throw ValidationError("scheme.weights: fine row for player " + std::to_string(p) +
                              " needs one entry per coalition member");
      }
      double sum = 0.0;
      for (const double v : row) {
        if (!std::isfinite(v)) throw ValidationError("scheme.weights: non-finite fine weight");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw ValidationError("scheme.weights: fine row for player " + std::to_string(p) + " does not sum to 1");
      }
    }
  }
}

bool is_coalition_independent(const FederationScheme& scheme) { return !std::holds_alternative<FineScheme>(scheme); }

// ---------------------------------------------------------------------------
// Two-size games

void validate(const TwoSizeGame& game) {
  if (game.n_small < 1) throw ValidationError("two_size.n_s: must be >= 1");
  if (game.n_large <= game.n_small) throw ValidationError("two_size: n_s must be < n_l");
  if (game.small_count < 0) throw ValidationError("two_size.S: must be non-negative");
  if (game.large_count < 0) throw ValidationError("two_size.L: must be non-negative");
  if (game.small_count + game.large_count < 1) throw ValidationError("two_size: S + L must be >= 1");
}

std::vector<int> labeled_players(const TwoSizeGame& game) {
  validate(game);
  std::vector<int> players(static_cast<std::size_t>(game.small_count), game.n_small);
  players.insert(players.end(), static_cast<std::size_t>(game.large_count), game.n_large);
  return players;
}

int compare_to_threshold(int n, const GameConfig& config) {
  if (config.exact) {
    if (config.exact->sigma_sq == 0) return -1;
    const Rational lhs = Rational(n) * config.exact->sigma_sq;
    if (lhs < config.exact->mu_e) return -1;
    if (lhs > config.exact->mu_e) return 1;
    return 0;
  }
  if (config.sigma_sq == 0.0) return -1;
  const double lhs = static_cast<double>(n) * config.sigma_sq;
  const double tol = 1e-12 * std::max(std::abs(lhs), std::abs(config.mu_e));
  if (lhs < config.mu_e - tol) return -1;
  if (lhs > config.mu_e + tol) return 1;
  return 0;
}

}  // namespace modelshare
