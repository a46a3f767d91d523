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

#include "modelshare/cli/config_io.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "modelshare/cli/partition_syntax.hpp"

namespace modelshare::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ValidationError(where + ": unknown key '" + key + "'");
  }
}

// A parameter given either as a JSON number or as an exact decimal/fraction.
struct Param {
  double value = 0.0;
  Rational exact;
  bool textual = false;
};

Param read_param(const json& v, const std::string& key) {
  Param p;
  if (v.is_number()) {
    p.value = v.get<double>();
    p.exact = to_rational(p.value);
  } else if (v.is_string()) {
    try {
      p.exact = parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw ValidationError(key + ": malformed number '" + v.get<std::string>() + "'");
    }
    p.value = to_double(p.exact);
    p.textual = true;
  } else {
    throw ValidationError(key + ": expected a number");
  }
  return p;
}

int read_int(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ValidationError(where + "." + key + ": missing");
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

std::uint64_t read_u64(const json& v, const std::string& key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ValidationError(key + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

ThetaFamily parse_theta_family(const std::string& s) {
  if (s == "gaussian") return ThetaFamily::Gaussian;
  if (s == "uniform") return ThetaFamily::Uniform;
  if (s == "lognormal-centered") return ThetaFamily::LognormalCentered;
  throw ValidationError("mc.theta_family: unknown family '" + s + "'");
}

EpsilonRule parse_epsilon_rule(const std::string& s) {
  if (s == "constant") return EpsilonRule::Constant;
  if (s == "gamma") return EpsilonRule::Gamma;
  throw ValidationError("mc.epsilon_rule: unknown rule '" + s + "'");
}

SampleFamily parse_sample_family(const std::string& s) {
  if (s == "gaussian") return SampleFamily::Gaussian;
  if (s == "uniform") return SampleFamily::Uniform;
  throw ValidationError("mc.sample_family: unknown family '" + s + "'");
}

std::string read_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ValidationError(key + ": expected a string");
  return v.get<std::string>();
}

FederationScheme scheme_from_json(const std::string& name, const json* weights, std::size_t player_count) {
  if (name == "local") return LocalScheme{};
  if (name == "uniform") return UniformScheme{};
  if (name == "coarse-optimal") return CoarseOptimalScheme{};
  if (name == "fine-optimal") return FineOptimalScheme{};
  if (name == "coarse") {
    if (!weights) throw ValidationError("weights: coarse scheme needs weights");
    CoarseScheme s;
    if (weights->is_number()) {
      s.weights.assign(player_count, weights->get<double>());
    } else if (weights->is_array()) {
      for (const auto& w : *weights) {
        if (!w.is_number()) throw ValidationError("weights: coarse weights must be numbers");
        s.weights.push_back(w.get<double>());
      }
    } else {
      throw ValidationError("weights: expected a number or an array");
    }
    return s;
  }
  if (name == "fine") {
    if (!weights || !weights->is_object()) throw ValidationError("weights: fine scheme needs rows keyed by player");
    FineScheme s;
    for (const auto& [label, row] : weights->items()) {
      if (!row.is_array()) throw ValidationError("weights." + label + ": expected an array");
      std::vector<double> values;
      for (const auto& v : row) {
        if (!v.is_number()) throw ValidationError("weights." + label + ": entries must be numbers");
        values.push_back(v.get<double>());
      }
      s.rows[parse_player(label, player_count)] = std::move(values);
    }
    return s;
  }
  throw ValidationError("scheme: unknown scheme '" + name + "'");
}

}  // namespace

FederationScheme make_scheme(const std::string& name, const std::optional<std::string>& weights_json,
                             std::size_t player_count) {
  if (!weights_json) return scheme_from_json(name, nullptr, player_count);
  json parsed;
  try {
    parsed = json::parse(*weights_json);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("weights: ") + e.what());
  }
  return scheme_from_json(name, &parsed, player_count);
}

RunConfigDocument parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  reject_unknown(doc, {"mu_e", "sigma_sq", "players", "scheme", "weights", "linreg", "two_size", "mc"}, "config");

  RunConfigDocument out;
  auto& config = out.config;
  if (!doc.contains("mu_e")) throw ValidationError("mu_e: missing");
  const Param mu_e = read_param(doc.at("mu_e"), "mu_e");
  const Param sigma_sq = doc.contains("sigma_sq") ? read_param(doc.at("sigma_sq"), "sigma_sq") : Param{};
  config.mu_e = mu_e.value;
  config.sigma_sq = sigma_sq.value;
  bool textual = mu_e.textual || sigma_sq.textual;
  std::optional<Rational> exact_bias;

  if (doc.contains("players")) {
    const auto& players = doc.at("players");
    if (!players.is_array()) throw ValidationError("players: expected an array");
    for (const auto& n : players) {
      if (!n.is_number_integer()) throw ValidationError("players: sample counts must be integers");
      config.players.push_back(n.get<int>());
    }
  }

  if (doc.contains("linreg")) {
    const auto& lr = doc.at("linreg");
    reject_unknown(lr, {"d", "sigma_bias_sq", "variances"}, "linreg");
    LinRegSpec spec;
    spec.dim = read_int(lr, "d", "linreg");
    if (lr.contains("variances")) {
      if (lr.contains("sigma_bias_sq")) throw ValidationError("linreg: give sigma_bias_sq or variances, not both");
      const auto& vs = lr.at("variances");
      if (!vs.is_array()) throw ValidationError("linreg.variances: expected an array");
      Rational sum = 0;
      for (const auto& v : vs) {
        const Param p = read_param(v, "linreg.variances");
        out.mc.dist.coefficient_variances.push_back(p.value);
        sum += p.exact;
        textual = textual || p.textual;
      }
      if (static_cast<int>(out.mc.dist.coefficient_variances.size()) != spec.dim) {
        throw ValidationError("linreg.variances: need one variance per dimension");
      }
      spec.sigma_bias_sq = to_double(sum);
      exact_bias = sum;
    } else {
      if (!lr.contains("sigma_bias_sq")) throw ValidationError("linreg.sigma_bias_sq: missing");
      const Param p = read_param(lr.at("sigma_bias_sq"), "linreg.sigma_bias_sq");
      spec.sigma_bias_sq = p.value;
      exact_bias = p.exact;
      textual = textual || p.textual;
    }
    config.linreg = spec;
  }
  if (textual) config.exact = ExactParams{mu_e.exact, sigma_sq.exact, exact_bias};

  if (doc.contains("two_size")) {
    const auto& ts = doc.at("two_size");
    reject_unknown(ts, {"n_s", "n_l", "S", "L"}, "two_size");
    out.two_size = TwoSizeGame{read_int(ts, "n_s", "two_size"), read_int(ts, "n_l", "two_size"),
                               read_int(ts, "S", "two_size"), read_int(ts, "L", "two_size")};
    validate(*out.two_size);
  }

  if (doc.contains("mc")) {
    const auto& mc = doc.at("mc");
    reject_unknown(mc, {"trials", "seed", "theta_family", "theta_mean", "epsilon_rule", "gamma_shape", "sample_family"},
                   "mc");
    auto& dist = out.mc.dist;
    if (mc.contains("trials")) out.mc.trials = read_u64(mc.at("trials"), "mc.trials");
    if (mc.contains("seed")) out.mc.seed = read_u64(mc.at("seed"), "mc.seed");
    if (mc.contains("theta_family"))
      dist.theta_family = parse_theta_family(read_string(mc.at("theta_family"), "mc.theta_family"));
    if (mc.contains("theta_mean")) dist.theta_mean = read_param(mc.at("theta_mean"), "mc.theta_mean").value;
    if (mc.contains("epsilon_rule"))
      dist.epsilon_rule = parse_epsilon_rule(read_string(mc.at("epsilon_rule"), "mc.epsilon_rule"));
    if (mc.contains("gamma_shape")) dist.gamma_shape = read_param(mc.at("gamma_shape"), "mc.gamma_shape").value;
    if (mc.contains("sample_family")) {
      dist.sample_family = parse_sample_family(read_string(mc.at("sample_family"), "mc.sample_family"));
    }
    if (out.mc.trials && *out.mc.trials < 1) throw ValidationError("mc.trials: must be >= 1");
    validate(dist);
  }

  if (config.players.empty()) {
    if (!out.two_size) throw ValidationError("players: missing (required unless two_size is given)");
    validate_parameters(config);
  } else {
    validate(config);
  }

  const std::string scheme = doc.contains("scheme") ? read_string(doc.at("scheme"), "scheme") : "uniform";
  out.scheme = scheme_from_json(scheme, doc.contains("weights") ? &doc.at("weights") : nullptr, config.size());
  if (doc.contains("weights") && (scheme != "coarse" && scheme != "fine")) {
    throw ValidationError("weights: only the coarse and fine schemes take weights");
  }
  if (!config.players.empty() && std::holds_alternative<CoarseScheme>(out.scheme)) {
    validate_scheme(out.scheme, Partition::grand(config.size()));
  }
  return out;
}

RunConfigDocument load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace modelshare::cli
