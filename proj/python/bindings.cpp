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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "modelshare/cli/cli.hpp"
#include "modelshare/cli/config_io.hpp"
#include "modelshare/cli/partition_syntax.hpp"
#include "modelshare/cli/reproduce.hpp"
#include "modelshare/constructive.hpp"
#include "modelshare/errors.hpp"
#include "modelshare/montecarlo.hpp"
#include "modelshare/stability.hpp"
#include "modelshare/weights.hpp"

namespace py = pybind11;
using namespace modelshare;

namespace {

GameConfig make_config(std::vector<int> players, double mu_e, double sigma_sq, std::optional<int> dim,
                       std::optional<double> sigma_bias_sq) {
  GameConfig c;
  c.players = std::move(players);
  c.mu_e = mu_e;
  c.sigma_sq = sigma_sq;
  if (dim) c.linreg = LinRegSpec{*dim, sigma_bias_sq.value_or(sigma_sq)};
  validate(c);
  return c;
}

GameConfig parameters_only(double mu_e, double sigma_sq) {
  GameConfig c;
  c.mu_e = mu_e;
  c.sigma_sq = sigma_sq;
  validate_parameters(c);
  return c;
}

StabilityNotion parse_notion(const std::string& name) {
  if (name == "core") return StabilityNotion::Core;
  if (name == "strict") return StabilityNotion::StrictCore;
  if (name == "individual") return StabilityNotion::Individual;
  throw ValidationError("notion: expected core, strict or individual");
}

std::vector<std::pair<int, int>> as_pairs(const Arrangement& arr) {
  std::vector<std::pair<int, int>> out;
  for (const auto& p : arr) out.emplace_back(p.small, p.large);
  return out;
}

Arrangement from_pairs(const std::vector<std::pair<int, int>>& pairs) {
  Arrangement out;
  for (const auto& [s, l] : pairs) out.push_back({s, l});
  return out;
}

FederationScheme scheme_of(const std::string& name, std::optional<std::string> weights, std::size_t m) {
  return cli::make_scheme(name, weights, m);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bias-variance errors, optimal weights and coalition stability for federated estimation";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_OverflowError);

  py::class_<GameConfig>(m, "GameConfig")
      .def(py::init(&make_config), py::arg("players"), py::arg("mu_e"), py::arg("sigma_sq"),
           py::arg("dim") = py::none(), py::arg("sigma_bias_sq") = py::none())
      .def_readonly("players", &GameConfig::players)
      .def_readonly("mu_e", &GameConfig::mu_e)
      .def_readonly("sigma_sq", &GameConfig::sigma_sq)
      .def("__repr__", [](const GameConfig& c) {
        std::ostringstream os;
        os << "GameConfig(players=[";
        for (std::size_t i = 0; i < c.players.size(); ++i) os << (i ? ", " : "") << c.players[i];
        os << "], mu_e=" << c.mu_e << ", sigma_sq=" << c.sigma_sq << ")";
        return os.str();
      });

  m.def(
      "error",
      [](const GameConfig& c, int player, std::vector<PlayerIndex> members, const std::string& scheme,
         std::optional<std::string> weights) {
        return scheme_error(player, Coalition(std::move(members), c.size()), scheme_of(scheme, weights, c.size()), c);
      },
      py::arg("config"), py::arg("player"), py::arg("members"), py::arg("scheme") = "uniform",
      py::arg("weights") = py::none(), "Expected MSE of one player inside a coalition.");

  m.def(
      "player_errors",
      [](const GameConfig& c, const std::string& partition, const std::string& scheme,
         std::optional<std::string> weights) {
        const auto p = cli::parse_partition(partition, c.size());
        return player_errors(p, scheme_of(scheme, weights, c.size()), c).errors;
      },
      py::arg("config"), py::arg("partition"), py::arg("scheme") = "uniform", py::arg("weights") = py::none());

  m.def(
      "optimal_w",
      [](const GameConfig& c, int player, std::vector<PlayerIndex> members) {
        return optimal_w(player, Coalition(std::move(members), c.size()), c);
      },
      py::arg("config"), py::arg("player"), py::arg("members"));
  m.def(
      "optimal_v",
      [](const GameConfig& c, int player, std::vector<PlayerIndex> members) {
        return optimal_v(player, Coalition(std::move(members), c.size()), c).row;
      },
      py::arg("config"), py::arg("player"), py::arg("members"));

  m.def(
      "check_stability",
      [](const GameConfig& c, const std::string& partition, const std::string& notion, const std::string& scheme,
         bool exact) -> py::tuple {
        StabilityOptions options;
        if (exact) options.mode = ComparisonMode::ExactRational;
        const auto p = cli::parse_partition(partition, c.size());
        const auto v = check_stability(p, scheme_of(scheme, std::nullopt, c.size()), c, parse_notion(notion), options);
        if (v.stable) return py::make_tuple(true, py::none());
        return py::make_tuple(false, cli::describe_witness(*v.witness));
      },
      py::arg("config"), py::arg("partition"), py::arg("notion") = "core", py::arg("scheme") = "uniform",
      py::arg("exact") = false, "Returns (stable, witness description or None).");

  m.def(
      "stable_partitions",
      [](const GameConfig& c, const std::string& notion, const std::string& scheme) {
        std::vector<std::string> out;
        for (const auto& p : find_stable_partitions(c, scheme_of(scheme, std::nullopt, c.size()), parse_notion(notion)))
          out.push_back(cli::format_partition(p));
        return out;
      },
      py::arg("config"), py::arg("notion") = "core", py::arg("scheme") = "uniform");

  m.def(
      "construct_individually_stable",
      [](int n_s, int n_l, int big_s, int big_l, double mu_e, double sigma_sq) {
        return as_pairs(construct_individually_stable_uniform(TwoSizeGame{n_s, n_l, big_s, big_l},
                                                              parameters_only(mu_e, sigma_sq)));
      },
      py::arg("n_s"), py::arg("n_l"), py::arg("S"), py::arg("L"), py::arg("mu_e"), py::arg("sigma_sq"));
  m.def(
      "construct_strict_core_coarse",
      [](int n_s, int n_l, int big_s, int big_l, double mu_e, double sigma_sq) {
        return as_pairs(
            construct_strict_core_coarse(TwoSizeGame{n_s, n_l, big_s, big_l}, parameters_only(mu_e, sigma_sq)));
      },
      py::arg("n_s"), py::arg("n_l"), py::arg("S"), py::arg("L"), py::arg("mu_e"), py::arg("sigma_sq"));
  m.def(
      "blocking_profile",
      [](int n_s, int n_l, int big_s, int big_l, double mu_e, double sigma_sq,
         const std::vector<std::pair<int, int>>& arrangement) -> std::optional<std::pair<int, int>> {
        const auto hit = two_size_blocking_search(TwoSizeGame{n_s, n_l, big_s, big_l}, from_pairs(arrangement),
                                                  UniformScheme{}, parameters_only(mu_e, sigma_sq));
        if (!hit) return std::nullopt;
        return std::pair{hit->small, hit->large};
      },
      py::arg("n_s"), py::arg("n_l"), py::arg("S"), py::arg("L"), py::arg("mu_e"), py::arg("sigma_sq"),
      py::arg("arrangement"));

  m.def(
      "empirical_error",
      [](const GameConfig& c, int player, std::vector<PlayerIndex> members, const std::string& scheme,
         std::uint64_t trials, std::uint64_t seed) {
        const Coalition coalition(std::move(members), c.size());
        const auto s = scheme_of(scheme, std::nullopt, c.size());
        FineScheme resolved;
        resolved.rows[player] = resolve_weights(s, player, coalition, c);
        const TrialPlan plan{trials, seed, 0};
        py::gil_scoped_release release;
        const auto e = c.linreg ? empirical_mse_linreg(c, coalition, resolved, player, {}, plan)
                                : empirical_mse_mean(c, coalition, resolved, player, {}, plan);
        return std::pair{e.mean, e.standard_error};
      },
      py::arg("config"), py::arg("player"), py::arg("members"), py::arg("scheme") = "uniform",
      py::arg("trials") = 10000, py::arg("seed") = 0, "Monte Carlo (mean, standard error).");

  m.def(
      "reproduce",
      [](std::optional<int> table) {
        return table ? cli::reproduce_table(*table, cli::TableFormat::Plain)
                     : cli::reproduce_all(cli::TableFormat::Plain);
      },
      py::arg("table") = py::none());

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line front end; returns (exit code, stdout, stderr).");
}
