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

// The reference error tables and the two-size counterexample, as data plus
// the reports computed from them.

#ifndef MODELSHARE_CLI_REPRODUCE_HPP
#define MODELSHARE_CLI_REPRODUCE_HPP

#include <string>
#include <vector>

#include "modelshare/cli/table.hpp"
#include "modelshare/core_model.hpp"
#include "modelshare/stability.hpp"

namespace modelshare::cli {

struct ReferenceRow {
  std::string partition;  // inline partition grammar
  /// Printed values for `shown_players`, verbatim (precision matters).
  std::vector<std::string> reference;
};

struct ReferenceTable {
  int number = 0;
  std::string title;
  GameConfig config;
  FederationScheme scheme;
  std::vector<PlayerIndex> shown_players;
  std::vector<ReferenceRow> rows;
};

std::vector<ReferenceTable> reference_tables();

/// Computed errors of the shown players for each row's partition.
Report table_report(const ReferenceTable& table);

/// Allowed gap between a computed value and a printed one: 0.005, widened to
/// half a unit of the last digit when fewer than two decimals are printed.
double reference_tolerance(const std::string& printed);

struct ProfileCheck {
  CoalitionProfile profile;
  PlayerType type;
  double reference;
};

struct Counterexample {
  GameConfig config;
  TwoSizeGame game;
  std::vector<ProfileCheck> checks;
};

/// mu_e = 100, sigma^2 = 1, n_s = 11, n_l = 106, S = 70, L = 7.
Counterexample two_size_counterexample();

std::string reproduce_table(int number, TableFormat format);
std::string reproduce_counterexample(TableFormat format);
std::string reproduce_all(TableFormat format);

}  // namespace modelshare::cli

#endif  // MODELSHARE_CLI_REPRODUCE_HPP
