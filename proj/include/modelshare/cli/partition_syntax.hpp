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

// Inline partition grammar: coalitions in braces separated by '|', players as
// letters a, b, c, ... (or decimal indices), e.g. "{a,b}|{c}".

#ifndef MODELSHARE_CLI_PARTITION_SYNTAX_HPP
#define MODELSHARE_CLI_PARTITION_SYNTAX_HPP

#include <string>
#include <string_view>

#include "modelshare/core_model.hpp"
#include "modelshare/stability.hpp"

namespace modelshare::cli {

std::string player_label(PlayerIndex player);
PlayerIndex parse_player(std::string_view token, std::size_t player_count);

Coalition parse_coalition(std::string_view text, std::size_t player_count);
Partition parse_partition(std::string_view text, std::size_t player_count);

std::string format_coalition(const Coalition& c);
std::string format_partition(const Partition& p);

/// "blocked by {a,b}", "b joins {a}" or "a leaves to be alone".
std::string describe_witness(const StabilityWitness& witness);

}  // namespace modelshare::cli

#endif  // MODELSHARE_CLI_PARTITION_SYNTAX_HPP
