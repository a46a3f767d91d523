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

#include "modelshare/cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <optional>
#include <sstream>

#include "modelshare/cli/config_io.hpp"
#include "modelshare/cli/partition_syntax.hpp"
#include "modelshare/cli/reproduce.hpp"
#include "modelshare/cli/table.hpp"
#include "modelshare/constructive.hpp"
#include "modelshare/errors.hpp"
#include "modelshare/montecarlo.hpp"
#include "modelshare/stability.hpp"
#include "modelshare/weights.hpp"

namespace modelshare::cli {

namespace {

constexpr std::size_t kMaxErrorTablePlayers = 5;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::string format = "plain";
  bool exact = false;
  unsigned threads = 0;

  std::optional<std::string> config_path;
  std::optional<std::string> players;
  std::optional<std::string> mu_e;
  std::optional<std::string> sigma_sq;
  std::optional<int> dim;
  std::optional<std::string> sigma_bias_sq;
  std::optional<std::string> scheme;
  std::optional<std::string> weights;
};

Rational parse_param(const std::string& text, const std::string& key) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw ValidationError(key + ": malformed number '" + text + "'");
  }
}

std::vector<int> parse_players(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("players: bad sample count '" + item + "'");
    }
  }
  return out;
}

// Config from --config, with inline flags layered on top.
RunConfigDocument load_document(const GlobalOptions& g, bool need_players) {
  RunConfigDocument doc;
  bool scheme_from_file = false;
  if (g.config_path) {
    doc = load_config(*g.config_path);
    scheme_from_file = true;
  } else {
    if (!g.mu_e) throw ValidationError("mu_e: missing (pass --config or --mue)");
  }
  auto& config = doc.config;
  if (g.players) config.players = parse_players(*g.players);
  if (g.mu_e || g.sigma_sq || g.sigma_bias_sq) {
    ExactParams exact = config.exact.value_or(ExactParams{to_rational(config.mu_e), to_rational(config.sigma_sq), {}});
    if (g.mu_e) exact.mu_e = parse_param(*g.mu_e, "mu_e");
    if (g.sigma_sq) exact.sigma_sq = parse_param(*g.sigma_sq, "sigma_sq");
    if (g.sigma_bias_sq) exact.sigma_bias_sq = parse_param(*g.sigma_bias_sq, "linreg.sigma_bias_sq");
    config.mu_e = to_double(exact.mu_e);
    config.sigma_sq = to_double(exact.sigma_sq);
    config.exact = exact;
  }
  if (g.dim || g.sigma_bias_sq) {
    LinRegSpec spec = config.linreg.value_or(LinRegSpec{});
    if (g.dim) spec.dim = *g.dim;
    if (g.sigma_bias_sq) spec.sigma_bias_sq = to_double(*config.exact->sigma_bias_sq);
    config.linreg = spec;
  }
  if (need_players || !config.players.empty()) {
    validate(config);
  } else {
    validate_parameters(config);
  }
  if (g.scheme || !scheme_from_file) {
    doc.scheme = make_scheme(g.scheme.value_or("uniform"), g.weights, config.size());
  }
  if (g.trials) doc.mc.trials = g.trials;
  if (g.seed) doc.mc.seed = g.seed;
  return doc;
}

StabilityOptions stability_options(const GlobalOptions& g, double epsilon, bool singleton_deviation) {
  StabilityOptions options;
  options.order.epsilon = epsilon;
  options.mode = g.exact ? ComparisonMode::ExactRational : ComparisonMode::FloatEpsilon;
  options.singleton_deviation = singleton_deviation;
  return options;
}

std::vector<StabilityNotion> parse_notions(const std::string& name) {
  if (name == "core") return {StabilityNotion::Core};
  if (name == "strict") return {StabilityNotion::StrictCore};
  if (name == "individual") return {StabilityNotion::Individual};
  if (name == "all") return {StabilityNotion::Core, StabilityNotion::StrictCore, StabilityNotion::Individual};
  throw ValidationError("notion: expected core, strict, individual or all");
}

// ---- subcommands -----------------------------------------------------------

void cmd_errors(const GlobalOptions& g, const std::optional<std::string>& partition, std::ostream& out) {
  const auto doc = load_document(g, true);
  const auto& config = doc.config;
  const auto format = parse_format(g.format);
  Report report;
  if (partition) {
    const auto p = parse_partition(*partition, config.size());
    const auto errs = player_errors(p, doc.scheme, config).errors;
    report.columns = {{"err", {}}};
    for (PlayerIndex j = 0; j < config.size(); ++j) {
      report.labels.push_back(player_label(j));
      report.columns[0].values.push_back(errs[j]);
    }
  } else {
    if (config.size() > kMaxErrorTablePlayers) {
      throw CapExceeded("errors: the all-partitions table is limited to " + std::to_string(kMaxErrorTablePlayers) +
                        " players; pass --partition");
    }
    report.label_header = "partition";
    for (PlayerIndex j = 0; j < config.size(); ++j) report.columns.push_back({"err_" + player_label(j), {}});
    PartitionEnumerator it(config.size());
    while (auto p = it.next()) {
      const auto errs = player_errors(*p, doc.scheme, config).errors;
      report.labels.push_back(format_partition(*p));
      for (PlayerIndex j = 0; j < config.size(); ++j) report.columns[j].values.push_back(errs[j]);
    }
  }
  out << emit_table(report, format);
}

void cmd_weights(const GlobalOptions& g, const std::optional<std::string>& coalition, std::ostream& out) {
  const auto doc = load_document(g, true);
  const auto& config = doc.config;
  const Coalition c = coalition ? parse_coalition(*coalition, config.size()) : Coalition::grand(config.size());
  Report report;
  report.columns = {{"w_opt", {}}, {"coarse_err", {}}, {"fine_err", {}}};
  for (const auto k : c.members()) report.columns.push_back({"v_" + player_label(k), {}});
  for (const auto j : c.members()) {
    report.labels.push_back(player_label(j));
    report.columns[0].values.push_back(optimal_w(j, c, config));
    report.columns[1].values.push_back(optimal_coarse_mse(j, c, config));
    report.columns[2].values.push_back(optimal_fine_mse(j, c, config));
    const auto row = optimal_v(j, c, config).as_row();
    for (std::size_t k = 0; k < row.size(); ++k) report.columns[3 + k].values.push_back(row[k]);
  }
  out << emit_table(report, parse_format(g.format));
}

void cmd_stability(const GlobalOptions& g, const std::optional<std::string>& partition, bool enumerate,
                   const std::string& notion_name, double epsilon, bool no_singleton, std::ostream& out) {
  const auto doc = load_document(g, true);
  const auto& config = doc.config;
  const auto options = stability_options(g, epsilon, !no_singleton);
  const auto notions = parse_notions(notion_name);
  if (enumerate) {
    for (const auto notion : notions) {
      const auto stable = find_stable_partitions(config, doc.scheme, notion, options);
      out << to_string(notion) << ": " << stable.size() << " of " << bell_number(config.size())
          << " partitions stable\n";
      for (const auto& p : stable) out << "  " << format_partition(p) << "\n";
    }
    return;
  }
  if (!partition) throw ValidationError("partition: pass --partition or --enumerate");
  const auto p = parse_partition(*partition, config.size());
  for (const auto notion : notions) {
    const auto verdict = check_stability(p, doc.scheme, config, notion, options);
    out << to_string(notion) << ": ";
    if (verdict.stable) {
      out << "stable\n";
    } else {
      out << "unstable (" << describe_witness(*verdict.witness) << ")\n";
    }
  }
}

struct ConstructFlags {
  bool uniform = false;
  bool coarse = false;
  bool regime = false;
  std::optional<int> n_small, n_large, small_count, large_count;
  double epsilon = 1e-9;
};

void cmd_construct(const GlobalOptions& g, const ConstructFlags& f, std::ostream& out) {
  auto doc = load_document(g, false);
  TwoSizeGame game = doc.two_size.value_or(TwoSizeGame{});
  const bool any_inline = f.n_small || f.n_large || f.small_count || f.large_count;
  if (!doc.two_size && !(f.n_small && f.n_large && f.small_count && f.large_count)) {
    throw ValidationError("two_size: pass --ns, --nl, --S and --L (or a config with two_size)");
  }
  if (any_inline) {
    game.n_small = f.n_small.value_or(game.n_small);
    game.n_large = f.n_large.value_or(game.n_large);
    game.small_count = f.small_count.value_or(game.small_count);
    game.large_count = f.large_count.value_or(game.large_count);
  }
  validate(game);
  const auto& config = doc.config;
  const auto options = stability_options(g, f.epsilon, true);
  if ((f.uniform ? 1 : 0) + (f.coarse ? 1 : 0) + (f.regime ? 1 : 0) > 1) {
    throw ValidationError("construct: choose one of --uniform, --coarse, --regime");
  }
  if (f.coarse) {
    const auto arrangement = construct_strict_core_coarse(game, config, options);
    const auto blocker = two_size_blocking_search(game, arrangement, CoarseOptimalScheme{}, config, options,
                                                  StabilityNotion::StrictCore);
    out << describe_arrangement(arrangement) << "; strictly core stable: " << (blocker ? "no" : "yes");
    if (blocker) out << " (blocked by " << to_string(*blocker) << ")";
    out << "\n";
    return;
  }
  if (f.regime) {
    const auto r = regime_predicates(game, config, options);
    out << "regime: " << to_string(r.regime) << "\n";
    out << to_string(r.notion) << (r.unique ? " (unique)" : "") << ": ";
    for (std::size_t k = 0; k < r.arrangements.size(); ++k) {
      if (k) out << "; ";
      out << describe_arrangement(r.arrangements[k]);
    }
    out << "\n" << r.note << "\n";
    return;
  }
  const FederationScheme uniform = UniformScheme{};
  const auto arrangement = construct_individually_stable_uniform(game, config, options);
  const bool individual = !two_size_individual_deviation(game, arrangement, uniform, config, options);
  const auto blocker = two_size_blocking_search(game, arrangement, uniform, config, options);
  out << describe_arrangement(arrangement) << "; individually stable: " << (individual ? "yes" : "no")
      << "; core stable: " << (blocker ? "no" : "yes");
  if (blocker) out << " (blocked by " << to_string(*blocker) << ")";
  out << "\n";
}

void cmd_verify(const GlobalOptions& g, const std::optional<std::string>& coalition,
                const std::optional<std::string>& player, std::ostream& out) {
  std::vector<BatteryCase> cases;
  std::optional<std::uint64_t> trials = g.trials;
  std::optional<std::uint64_t> seed = g.seed;
  if (g.config_path || g.players) {
    const auto doc = load_document(g, true);
    BatteryCase one;
    one.name = "config";
    one.config = doc.config;
    one.config.exact.reset();
    const Coalition c =
        coalition ? parse_coalition(*coalition, doc.config.size()) : Coalition::grand(doc.config.size());
    one.members.assign(c.members().begin(), c.members().end());
    one.scheme = doc.scheme;
    one.player = player ? parse_player(*player, doc.config.size()) : c.members().front();
    if (!c.contains(one.player)) throw ValidationError("player: not a member of the coalition");
    one.dist = doc.mc.dist;
    cases.push_back(one);
    trials = doc.mc.trials;
    seed = doc.mc.seed;
  } else {
    cases = standard_battery();
  }
  TrialPlan plan;
  plan.trials = trials.value_or(100000);
  plan.seed = seed.value_or(0);
  plan.threads = g.threads;
  Report report;
  report.label_header = "case";
  report.columns = {{"closed_form", {}}, {"empirical", {}}, {"std_error", {}}, {"z", {}}};
  bool all_ok = true;
  for (const auto& spec : cases) {
    const auto r = run_case(spec, plan);
    report.labels.push_back(spec.name);
    report.columns[0].values.push_back(r.closed_form);
    report.columns[1].values.push_back(r.empirical.mean);
    report.columns[2].values.push_back(r.empirical.standard_error);
    report.columns[3].values.push_back(r.z_score());
    all_ok = all_ok && std::abs(r.z_score()) <= 3.0;
  }
  out << emit_table(report, parse_format(g.format));
  out << "trials: " << plan.trials << "; seed: " << plan.seed << "; all within 3 SE: " << (all_ok ? "yes" : "no")
      << "\n";
}

void cmd_reproduce(const GlobalOptions& g, const std::optional<int>& table, bool counterexample, std::ostream& out) {
  const auto format = parse_format(g.format);
  if (table && counterexample) throw ValidationError("reproduce: choose --table or --counterexample");
  if (table) {
    out << reproduce_table(*table, format);
  } else if (counterexample) {
    out << reproduce_counterexample(format);
  } else {
    out << reproduce_all(format);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability and error analysis for model-sharing coalitions", "modelshare"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Monte Carlo seed");
  app.add_option("--trials", g.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Table format: plain or csv");
  app.add_flag("--exact", g.exact, "Exact rational comparisons");
  app.add_option("--threads", g.threads, "Monte Carlo worker threads (0 = all cores)");
  app.add_option("--config", g.config_path, "JSON run configuration");
  app.add_option("--players", g.players, "Sample counts, e.g. 5,5,25");
  app.add_option("--mue", g.mu_e, "Expected noise variance (decimal or p/q)");
  app.add_option("--sigma2", g.sigma_sq, "Variance of true parameters (decimal or p/q)");
  app.add_option("--d", g.dim, "Regression dimension");
  app.add_option("--sigma-bias", g.sigma_bias_sq, "Regression bias coefficient");
  app.add_option("--scheme", g.scheme, "local, uniform, coarse, coarse-optimal, fine, fine-optimal");
  app.add_option("--weights", g.weights, "JSON weights for coarse/fine schemes");

  std::optional<std::string> partition;
  std::optional<std::string> coalition;
  std::optional<std::string> player;
  std::optional<int> table;
  bool enumerate = false;
  bool counterexample = false;
  bool all_tables = false;
  bool no_singleton = false;
  std::string notion = "all";
  double epsilon = 1e-9;
  ConstructFlags cf;

  auto* errors = app.add_subcommand("errors", "Per-player errors for a partition or every partition");
  errors->add_option("--partition", partition, "Partition such as {a,b}|{c}");

  auto* weights = app.add_subcommand("weights", "Optimal coarse and fine weights with their errors");
  weights->add_option("--coalition", coalition, "Coalition such as {a,b,c} (default: everyone)");

  auto* stability = app.add_subcommand("stability", "Stability verdicts with witnesses");
  stability->add_option("--partition", partition, "Partition such as {a,b}|{c}");
  stability->add_flag("--enumerate", enumerate, "List every stable partition");
  stability->add_option("--notion", notion, "core, strict, individual or all");
  stability->add_option("--epsilon", epsilon, "Relative tolerance for float comparisons");
  stability->add_flag("--no-singleton-deviation", no_singleton, "Individual moves only into existing coalitions");

  auto* construct = app.add_subcommand("construct", "Constructive arrangements for two-size populations");
  construct->add_flag("--uniform", cf.uniform, "Individually stable arrangement, uniform federation (default)");
  construct->add_flag("--coarse", cf.coarse, "Strictly core stable arrangement, optimal coarse federation");
  construct->add_flag("--regime", cf.regime, "Regime classification under uniform federation");
  construct->add_option("--ns", cf.n_small, "Samples of a small player");
  construct->add_option("--nl", cf.n_large, "Samples of a large player");
  construct->add_option("--S", cf.small_count, "Number of small players");
  construct->add_option("--L", cf.large_count, "Number of large players");
  construct->add_option("--epsilon", cf.epsilon, "Relative tolerance for float comparisons");

  auto* verify = app.add_subcommand("verify", "Monte Carlo versus closed-form errors");
  verify->add_option("--coalition", coalition, "Coalition to simulate (default: everyone)");
  verify->add_option("--player", player, "Player whose error is simulated");

  auto* reproduce = app.add_subcommand("reproduce", "Reference tables and the two-size counterexample");
  reproduce->add_option("--table", table, "Table number 1..5");
  reproduce->add_flag("--counterexample", counterexample, "Two-size counterexample only");
  reproduce->add_flag("--all", all_tables, "Everything (default)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInvalid;
  }

  try {
    if (errors->parsed()) cmd_errors(g, partition, out);
    if (weights->parsed()) cmd_weights(g, coalition, out);
    if (stability->parsed()) cmd_stability(g, partition, enumerate, notion, epsilon, no_singleton, out);
    if (construct->parsed()) cmd_construct(g, cf, out);
    if (verify->parsed()) cmd_verify(g, coalition, player, out);
    if (reproduce->parsed()) cmd_reproduce(g, table, counterexample, out);
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}

}  // namespace modelshare::cli
