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

#include "modelshare/montecarlo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "modelshare/errors.hpp"
#include "modelshare/weights.hpp"

namespace modelshare {

std::string to_string(ThetaFamily family) {
  switch (family) {
    case ThetaFamily::Gaussian:
      return "gaussian";
    case ThetaFamily::Uniform:
      return "uniform";
    case ThetaFamily::LognormalCentered:
      return "lognormal-centered";
  }
  return "?";
}

std::string to_string(EpsilonRule rule) { return rule == EpsilonRule::Gamma ? "gamma" : "constant"; }

std::string to_string(SampleFamily family) { return family == SampleFamily::Uniform ? "uniform" : "gaussian"; }

void validate(const DistributionSpec& dist) {
  if (!std::isfinite(dist.theta_mean)) throw ValidationError("dist.theta_mean: must be finite");
  if (dist.epsilon_rule == EpsilonRule::Gamma && !(dist.gamma_shape > 0.0 && std::isfinite(dist.gamma_shape))) {
    throw ValidationError("dist.gamma_shape: must be positive");
  }
  for (const double v : dist.coefficient_variances) {
    if (!(v >= 0.0 && std::isfinite(v))) throw ValidationError("dist.coefficient_variances: must be non-negative");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(trial + 0x632BE59BD9B4E019ULL)));
}

// Zero-mean draw with the requested variance.
class ThetaSampler {
 public:
  ThetaSampler(ThetaFamily family, double variance) : family_(family), variance_(variance) {
    if (family_ == ThetaFamily::LognormalCentered && variance_ > 0.0) {
      // exp(sZ) has variance u(u-1) with u = exp(s^2); solve u(u-1) = variance.
      const double u = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * variance_));
      log_sd_ = std::sqrt(std::log(u));
      shift_ = std::sqrt(u);
    }
  }

  double operator()(std::mt19937_64& rng) const {
    if (variance_ == 0.0) return 0.0;
    switch (family_) {
      case ThetaFamily::Gaussian:
        return std::normal_distribution<double>(0.0, std::sqrt(variance_))(rng);
      case ThetaFamily::Uniform: {
        const double half = std::sqrt(3.0 * variance_);
        return std::uniform_real_distribution<double>(-half, half)(rng);
      }
      case ThetaFamily::LognormalCentered:
        return std::exp(log_sd_ * std::normal_distribution<double>(0.0, 1.0)(rng)) - shift_;
    }
    return 0.0;
  }

 private:
  ThetaFamily family_;
  double variance_;
  double log_sd_ = 0.0;
  double shift_ = 0.0;
};

double draw_epsilon(const DistributionSpec& dist, double mu_e, std::mt19937_64& rng) {
  if (dist.epsilon_rule == EpsilonRule::Constant) return mu_e;
  return std::gamma_distribution<double>(dist.gamma_shape, mu_e / dist.gamma_shape)(rng);
}

// Zero-mean noise with variance eps.
double draw_noise(SampleFamily family, double eps, std::mt19937_64& rng) {
  if (eps <= 0.0) return 0.0;
  if (family == SampleFamily::Uniform) {
    const double half = std::sqrt(3.0 * eps);
    return std::uniform_real_distribution<double>(-half, half)(rng);
  }
  return std::normal_distribution<double>(0.0, std::sqrt(eps))(rng);
}

// Order-independent summation over a fixed index range.
double pairwise_sum(const double* data, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += data[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

template <class TrialFn>
EmpiricalEstimate run_trials(const TrialPlan& plan, TrialFn&& trial) {
  if (plan.trials < 1) throw ValidationError("mc.trials: must be >= 1");
  std::vector<double> values(plan.trials);
  std::vector<std::uint32_t> redraws(plan.trials, 0);
  unsigned threads = plan.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : plan.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, plan.trials));
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t t = begin; t < end; ++t) {
      auto rng = trial_stream(plan.seed, t);
      values[t] = trial(rng, redraws[t]);
    }
  };
  if (threads <= 1) {
    work(0, plan.trials);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (plan.trials + threads - 1) / threads;
    for (unsigned k = 0; k < threads; ++k) {
      const std::uint64_t begin = std::min<std::uint64_t>(plan.trials, k * chunk);
      const std::uint64_t end = std::min<std::uint64_t>(plan.trials, begin + chunk);
      pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  EmpiricalEstimate out;
  out.trials = plan.trials;
  const double n = static_cast<double>(plan.trials);
  out.mean = pairwise_sum(values.data(), values.size()) / n;
  for (auto& v : values) v = (v - out.mean) * (v - out.mean);
  const double ss = pairwise_sum(values.data(), values.size());
  out.standard_error = plan.trials > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  for (const auto r : redraws) out.resamples += r;
  return out;
}

void check_explicit(const FederationScheme& scheme) {
  if (std::holds_alternative<CoarseOptimalScheme>(scheme) || std::holds_alternative<FineOptimalScheme>(scheme)) {
    throw ValidationError("scheme: simulation needs explicit weights (resolve optimal schemes first)");
  }
}

}  // namespace

std::vector<double> resolve_weights(const FederationScheme& scheme, PlayerIndex j, const Coalition& c,
                                    const GameConfig& config) {
  const auto counts = coalition_counts(c, config);
  const std::size_t self = c.position_of(j);
  const std::size_t k = counts.size();
  std::vector<double> row(k, 0.0);
  if (k == 1) return {1.0};
  double total = 0.0;
  for (const int n : counts) total += n;
  auto blend = [&](double w) {
    for (std::size_t i = 0; i < k; ++i) row[i] = (1.0 - w) * counts[i] / total;
    row[self] += w;
  };
  if (std::holds_alternative<LocalScheme>(scheme)) {
    row[self] = 1.0;
  } else if (std::holds_alternative<UniformScheme>(scheme)) {
    blend(0.0);
  } else if (const auto* coarse = std::get_if<CoarseScheme>(&scheme)) {
    if (j >= coarse->weights.size()) throw ValidationError("scheme.weights: missing coarse weight");
    blend(coarse->weights[j]);
  } else if (std::holds_alternative<CoarseOptimalScheme>(scheme)) {
    blend(optimal_w(j, c, config));
  } else if (const auto* fine = std::get_if<FineScheme>(&scheme)) {
    const auto it = fine->rows.find(j);
    if (it == fine->rows.end() || it->second.size() != k) throw ValidationError("scheme.weights: bad fine row");
    row = it->second;
  } else {
    row = optimal_v(j, c, config).as_row();
  }
  return row;
}

EmpiricalEstimate empirical_mse_mean(const GameConfig& config, const Coalition& c, const FederationScheme& scheme,
                                     PlayerIndex j, const DistributionSpec& dist, const TrialPlan& plan) {
  validate(config);
  validate(dist);
  check_explicit(scheme);
  const auto row = resolve_weights(scheme, j, c, config);
  const auto counts = coalition_counts(c, config);
  const std::size_t self = c.position_of(j);
  const ThetaSampler theta(dist.theta_family, config.sigma_sq);
  const double mu_e = config.mu_e;
  return run_trials(plan, [&](std::mt19937_64& rng, std::uint32_t&) {
    double estimate = 0.0;
    double truth = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double theta_i = dist.theta_mean + theta(rng);
      const double eps_i = draw_epsilon(dist, mu_e, rng);
      double sum = 0.0;
      for (int s = 0; s < counts[i]; ++s) sum += theta_i + draw_noise(dist.sample_family, eps_i, rng);
      estimate += row[i] * (sum / counts[i]);
      if (i == self) truth = theta_i;
    }
    return (estimate - truth) * (estimate - truth);
  });
}

EmpiricalEstimate empirical_mse_linreg(const GameConfig& config, const Coalition& c, const FederationScheme& scheme,
                                       PlayerIndex j, const DistributionSpec& dist, const TrialPlan& plan) {
  if (!config.linreg) throw ValidationError("linreg: missing linear-regression spec");
  validate(config);
  validate(dist);
  check_explicit(scheme);
  const int d = config.linreg->dim;
  std::vector<double> variances = dist.coefficient_variances;
  if (variances.empty()) variances.assign(d, config.linreg->sigma_bias_sq / d);
  if (variances.size() != static_cast<std::size_t>(d)) {
    throw ValidationError("dist.coefficient_variances: need one variance per dimension");
  }
  double total_var = 0.0;
  for (const double v : variances) total_var += v;
  if (std::abs(total_var - config.linreg->sigma_bias_sq) > 1e-9 * std::max(1.0, config.linreg->sigma_bias_sq)) {
    throw ValidationError("dist.coefficient_variances: must sum to sigma_bias_sq");
  }
  std::vector<ThetaSampler> theta;
  for (const double v : variances) theta.emplace_back(dist.theta_family, v);

  const auto row = resolve_weights(scheme, j, c, config);
  const auto counts = coalition_counts(c, config);
  const std::size_t self = c.position_of(j);
  const double mu_e = config.mu_e;
  return run_trials(plan, [&](std::mt19937_64& rng, std::uint32_t& redraws) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd estimate = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd truth(d);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      Eigen::VectorXd theta_i(d);
      for (int k = 0; k < d; ++k) theta_i[k] = dist.theta_mean + theta[k](rng);
      const double eps_i = draw_epsilon(dist, mu_e, rng);
      const int n = counts[i];
      Eigen::MatrixXd x(n, d);
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
      for (;;) {
        for (int r = 0; r < n; ++r) {
          for (int k = 0; k < d; ++k) x(r, k) = gauss(rng);
        }
        qr.compute(x);
        if (qr.rank() == d) break;
        ++redraws;
      }
      Eigen::VectorXd y = x * theta_i;
      for (int r = 0; r < n; ++r) y[r] += draw_noise(dist.sample_family, eps_i, rng);
      estimate += row[i] * qr.solve(y);
      if (i == self) truth = theta_i;
    }
    Eigen::VectorXd point(d);
    for (int k = 0; k < d; ++k) point[k] = gauss(rng);
    const double gap = point.dot(estimate - truth);
    return gap * gap;
  });
}

double BatteryResult::z_score() const {
  if (empirical.standard_error == 0.0) return empirical.mean == closed_form ? 0.0 : INFINITY;
  return (empirical.mean - closed_form) / empirical.standard_error;
}

std::vector<BatteryCase> standard_battery() {
  auto mean_config = [](std::vector<int> players, double mu_e, double sigma_sq) {
    GameConfig c;
    c.players = std::move(players);
    c.mu_e = mu_e;
    c.sigma_sq = sigma_sq;
    return c;
  };
  auto linreg_config = [](std::vector<int> players, double mu_e, int d, double bias) {
    GameConfig c;
    c.players = std::move(players);
    c.mu_e = mu_e;
    c.sigma_sq = 0.0;
    c.linreg = LinRegSpec{d, bias};
    return c;
  };
  DistributionSpec gaussian;
  DistributionSpec flat;
  flat.theta_family = ThetaFamily::Uniform;
  flat.sample_family = SampleFamily::Uniform;
  DistributionSpec skewed;
  skewed.theta_family = ThetaFamily::LognormalCentered;
  skewed.epsilon_rule = EpsilonRule::Gamma;
  DistributionSpec shifted;
  shifted.theta_mean = 50.0;

  const auto t1 = mean_config({5, 5, 5}, 10.0, 1.0);
  const auto t2 = mean_config({5, 5, 25}, 10.0, 1.0);
  const auto t4 = mean_config({30, 30, 30, 300}, 10.0, 1.0);
  return {
      {"mean local n=5", mean_config({5}, 10.0, 1.0), {0}, LocalScheme{}, 0, gaussian},
      {"mean uniform (5,5,5) gaussian", t1, {0, 1, 2}, UniformScheme{}, 0, gaussian},
      {"mean uniform (5,5,5) uniform", t1, {0, 1, 2}, UniformScheme{}, 0, flat},
      {"mean uniform (5,5,25) player a", t2, {0, 1, 2}, UniformScheme{}, 0, shifted},
      {"mean coarse w=0.5 (5,5,25) player c", t2, {0, 1, 2}, CoarseScheme{{0.5, 0.5, 0.5}}, 2, gaussian},
      {"mean coarse-optimal (30,30,30,300) player a", t4, {0, 1, 2, 3}, CoarseOptimalScheme{}, 0, flat},
      {"mean fine-optimal (30,30,30,300) player a", t4, {0, 1, 2, 3}, FineOptimalScheme{}, 0, gaussian},
      {"mean fine-optimal (30,30,30,300) player d", t4, {0, 1, 2, 3}, FineOptimalScheme{}, 3, skewed},
      {"linreg local n=30 d=3", linreg_config({30}, 10.0, 3, 1.0), {0}, LocalScheme{}, 0, gaussian},
      {"linreg uniform (30,30,40) d=2",
       linreg_config({30, 30, 40}, 10.0, 2, 0.5),
       {0, 1, 2},
       UniformScheme{},
       0,
       gaussian},
      {"linreg coarse-optimal (20,30,50) d=2",
       linreg_config({20, 30, 50}, 10.0, 2, 0.4),
       {0, 1, 2},
       CoarseOptimalScheme{},
       0,
       flat},
      {"linreg fine-optimal (20,30,50) d=3",
       linreg_config({20, 30, 50}, 10.0, 3, 0.6),
       {0, 1, 2},
       FineOptimalScheme{},
       1,
       gaussian},
  };
}

BatteryResult run_case(const BatteryCase& spec, const TrialPlan& plan) {
  const Coalition c(spec.members, spec.config.size());
  BatteryResult out;
  out.spec = spec;
  out.closed_form = scheme_error(spec.player, c, spec.scheme, spec.config);
  FineScheme resolved;
  resolved.rows[spec.player] = resolve_weights(spec.scheme, spec.player, c, spec.config);
  out.empirical = spec.config.linreg ? empirical_mse_linreg(spec.config, c, resolved, spec.player, spec.dist, plan)
                                     : empirical_mse_mean(spec.config, c, resolved, spec.player, spec.dist, plan);
  return out;
}

}  // namespace modelshare
