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

#include "modelshare/cli/reproduce.hpp"

#include <cmath>

#include "modelshare/cli/partition_syntax.hpp"
#include "modelshare/constructive.hpp"
#include "modelshare/errors.hpp"

namespace modelshare::cli {

namespace {

GameConfig mean_config(std::vector<int> players) {
  GameConfig c;
  c.players = std::move(players);
  c.mu_e = 10.0;
  c.sigma_sq = 1.0;
  return c;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::vector<ReferenceTable> reference_tables() {
  const std::vector<PlayerIndex> abc{0, 1, 2};
  const std::vector<PlayerIndex> ad{0, 3};
  return {
      {1,
       "uniform federation, n=(5,5,5), mu_e=10, sigma_sq=1",
       mean_config({5, 5, 5}),
       UniformScheme{},
       abc,
       {{"{a}|{b}|{c}", {"2", "2", "2"}}, {"{a,b}|{c}", {"1.5", "1.5", "2"}}, {"{a,b,c}", {"1.3", "1.3", "1.3"}}}},
      {2,
       "uniform federation, n=(5,5,25), mu_e=10, sigma_sq=1",
       mean_config({5, 5, 25}),
       UniformScheme{},
       abc,
       {{"{a}|{b}|{c}", {"2", "2", "0.4"}},
        {"{a,b}|{c}", {"1.5", "1.5", "0.4"}},
        {"{a}|{b,c}", {"2", "1.72", "0.39"}},
        {"{a,b,c}", {"1.55", "1.55", "0.41"}}}},
      {3,
       "uniform federation, n=(25,25,25), mu_e=10, sigma_sq=1",
       mean_config({25, 25, 25}),
       UniformScheme{},
       abc,
       {{"{a}|{b}|{c}", {"0.4", "0.4", "0.4"}},
        {"{a,b}|{c}", {"0.7", "0.7", "0.4"}},
        {"{a,b,c}", {"0.8", "0.8", "0.8"}}}},
      {4,
       "optimal coarse federation, n=(30,30,30,300), mu_e=10, sigma_sq=1",
       mean_config({30, 30, 30, 300}),
       CoarseOptimalScheme{},
       ad,
       {{"{a}|{b}|{c}|{d}", {"0.333", "0.0333"}},
        {"{a,b,c}|{d}", {"0.278", "0.0333"}},
        {"{a,b,c,d}", {"0.280", "0.0326"}}}},
      {5,
       "optimal fine federation, n=(30,30,30,300), mu_e=10, sigma_sq=1",
       mean_config({30, 30, 30, 300}),
       FineOptimalScheme{},
       ad,
       {{"{a}|{b}|{c}|{d}", {"0.333", "0.0333"}},
        {"{a,b,c}|{d}", {"0.278", "0.0333"}},
        {"{a,b,c,d}", {"0.269", "0.0325"}}}},
  };
}

Report table_report(const ReferenceTable& table) {
  Report report;
  report.label_header = "partition";
  for (const auto j : table.shown_players) report.columns.push_back({"err_" + player_label(j), {}});
  for (const auto& row : table.rows) {
    const auto p = parse_partition(row.partition, table.config.size());
    const auto errs = player_errors(p, table.scheme, table.config).errors;
    report.labels.push_back(row.partition);
    for (std::size_t k = 0; k < table.shown_players.size(); ++k) {
      report.columns[k].values.push_back(errs[table.shown_players[k]]);
    }
  }
  return report;
}

double reference_tolerance(const std::string& printed) {
  const auto dot = printed.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(printed.size() - dot - 1);
  return decimals >= 2 ? 0.005 : 0.5 * std::pow(10.0, -decimals);
}

Counterexample two_size_counterexample() {
  Counterexample out;
  out.config.mu_e = 100.0;
  out.config.sigma_sq = 1.0;
  out.game = TwoSizeGame{11, 106, 70, 7};
  out.checks = {
      {{70, 3}, PlayerType::Small, 1.107322}, {{70, 0}, PlayerType::Small, 1.115584},
      {{70, 3}, PlayerType::Large, 0.932690}, {{0, 1}, PlayerType::Large, 0.943396},
      {{70, 4}, PlayerType::Large, 0.943664}, {{68, 4}, PlayerType::Small, 1.105263},
      {{68, 4}, PlayerType::Large, 0.943147},
  };
  return out;
}

std::string reproduce_table(int number, TableFormat format) {
  for (const auto& table : reference_tables()) {
    if (table.number == number) {
      return "Table " + std::to_string(number) + ": " + table.title + "\n" + emit_table(table_report(table), format);
    }
  }
  throw ValidationError("table: expected 1..5, got " + std::to_string(number));
}

std::string reproduce_counterexample(TableFormat format) {
  const auto ce = two_size_counterexample();
  const FederationScheme uniform = UniformScheme{};
  Report report;
  report.label_header = "profile";
  report.columns = {{"err_small", {}}, {"err_large", {}}};
  for (const auto& check : ce.checks) {
    const double err = profile_error(ce.game, check.profile, check.type, uniform, ce.config);
    const std::string label = to_string(check.profile);
    std::size_t row = 0;
    while (row < report.labels.size() && report.labels[row] != label) ++row;
    if (row == report.labels.size()) {
      report.labels.push_back(label);
      for (auto& col : report.columns) col.values.emplace_back();
    }
    report.columns[check.type == PlayerType::Small ? 0 : 1].values[row] = err;
  }
  const auto arrangement = construct_individually_stable_uniform(ce.game, ce.config);
  const bool individual = !two_size_individual_deviation(ce.game, arrangement, uniform, ce.config);
  const auto blocker = two_size_blocking_search(ce.game, arrangement, uniform, ce.config);

  std::string out = "Two-size counterexample: uniform federation, n_s=11, n_l=106, S=70, L=7, mu_e=100, sigma_sq=1\n";
  out += emit_table(report, format);
  out += "construction: " + describe_arrangement(arrangement) + "\n";
  out += "individually stable: " + yes_no(individual) + "\n";
  out += "core stable: " + yes_no(!blocker);
  if (blocker) out += " (blocked by " + to_string(*blocker) + ")";
  return out + "\n";
}

std::string reproduce_all(TableFormat format) {
  std::string out;
  for (int t = 1; t <= 5; ++t) out += reproduce_table(t, format) + "\n";
  return out + reproduce_counterexample(format);
}

}  // namespace modelshare::cli
