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

#include "modelshare/cli/partition_syntax.hpp"

#include <cctype>
#include <charconv>
#include <vector>

namespace modelshare::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string player_label(PlayerIndex player) {
  if (player < 26) return std::string(1, static_cast<char>('a' + player));
  return std::to_string(player);
}

PlayerIndex parse_player(std::string_view token, std::size_t player_count) {
  token = trim(token);
  if (token.empty()) throw ValidationError("partition: empty player name");
  PlayerIndex index = 0;
  if (token.size() == 1 && token[0] >= 'a' && token[0] <= 'z') {
    index = static_cast<PlayerIndex>(token[0] - 'a');
  } else {
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), index);
    if (ec != std::errc{} || end != token.data() + token.size()) {
      throw ValidationError("partition: bad player name '" + std::string(token) + "'");
    }
  }
  if (index >= player_count) {
    throw ValidationError("partition: player '" + std::string(token) + "' out of range");
  }
  return index;
}

Coalition parse_coalition(std::string_view text, std::size_t player_count) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw ValidationError("partition: coalition must be written as {a,b,...}");
  }
  text = text.substr(1, text.size() - 2);
  std::vector<PlayerIndex> members;
  while (true) {
    const auto comma = text.find(',');
    members.push_back(parse_player(text.substr(0, comma), player_count));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return Coalition(std::move(members), player_count);
}

Partition parse_partition(std::string_view text, std::size_t player_count) {
  std::vector<Coalition> parts;
  while (true) {
    const auto bar = text.find('|');
    parts.push_back(parse_coalition(text.substr(0, bar), player_count));
    if (bar == std::string_view::npos) break;
    text.remove_prefix(bar + 1);
  }
  return Partition(std::move(parts), player_count);
}

std::string format_coalition(const Coalition& c) {
  std::string out = "{";
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k) out += ',';
    out += player_label(c.members()[k]);
  }
  return out + "}";
}

std::string format_partition(const Partition& p) {
  std::string out;
  for (const auto& c : p.coalitions()) {
    if (!out.empty()) out += '|';
    out += format_coalition(c);
  }
  return out;
}

std::string describe_witness(const StabilityWitness& witness) {
  if (const auto* block = std::get_if<BlockingWitness>(&witness)) {
    return "blocked by " + format_coalition(block->coalition);
  }
  const auto& dev = std::get<DeviationWitness>(witness);
  if (!dev.target) return player_label(dev.player) + " leaves to be alone";
  return player_label(dev.player) + " joins " + format_coalition(*dev.target);
}

}  // namespace modelshare::cli
