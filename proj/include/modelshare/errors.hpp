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

// Exact expected mean-squared errors of a player federating under the local,
// uniform, coarse-grained and fine-grained schemes.
//
// Mean estimation and linear regression (zero-mean normal inputs) share one
// implementation. A player with n samples contributes a variance multiplier
//
//   m(n) = mu_e / n                   (mean estimation)
//   m(n) = mu_e * d / (n - d - 1)     (linear regression)
//
// and heterogeneity enters through a bias coefficient b (sigma^2, or
// sum_d E[(x^d)^2] sigma_d^2). For a weight row v over the coalition,
//
//   err_j(v) = sum_i v_i^2 m(n_i) + (sum_{i!=j} v_i^2 + (sum_{i!=j} v_i)^2) b.
//
// Uniform and coarse federation are the rows v_i = n_i/N and
// v = w e_j + (1-w) n/N; their closed forms below are evaluated directly.

#ifndef MODELSHARE_ERRORS_HPP
#define MODELSHARE_ERRORS_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "modelshare/core_model.hpp"

namespace modelshare {

/// Scalar parameters of the error formulas, in arithmetic `Real`.
template <class Real>
struct ErrorModel {
  Real mu_e;
  Real bias;    // sigma^2, or the linear-regression bias coefficient
  int dim = 0;  // 0 selects mean estimation

  Real multiplier(int n) const {
    if (dim == 0) return Real(mu_e / Real(n));
    return Real(mu_e * Real(dim) / Real(n - dim - 1));
  }
};

/// Floating-point model for a validated config.
ErrorModel<double> error_model(const GameConfig& config);

/// Exact model: uses config.exact when present, otherwise the exact values of
/// the stored doubles.
ErrorModel<Rational> exact_error_model(const GameConfig& config);

/// Same as above but only the distribution parameters are validated.
ErrorModel<double> parameter_error_model(const GameConfig& config);
ErrorModel<Rational> exact_parameter_error_model(const GameConfig& config);

// ---------------------------------------------------------------------------
// Coalition-local formulas. `counts` are the sample counts of the coalition
// members and `self` indexes the evaluated player within `counts`.

template <class Real>
Real local_error(int n, const ErrorModel<Real>& model) {
  return model.multiplier(n);
}

namespace detail {

template <class Real>
struct UniformTerms {
  Real variance;   // sum_i (n_i/N)^2 m(n_i)
  Real bias_mass;  // (sum_{i!=j} n_i^2 + (N - n_j)^2) / N^2
};

template <class Real>
UniformTerms<Real> uniform_terms(std::span<const int> counts, std::size_t self, const ErrorModel<Real>& model) {
  long long total = 0;
  for (const int n : counts) total += n;
  const Real big_n(total);
  Real variance(0);
  if (model.dim == 0) {
    variance = model.mu_e / big_n;
  } else {
    for (const int n : counts) {
      const Real share = Real(n) / big_n;
      variance += share * share * model.multiplier(n);
    }
  }
  long long sq_others = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i != self) sq_others += static_cast<long long>(counts[i]) * counts[i];
  }
  const long long rest = total - counts[self];
  const Real bias_mass = Real(sq_others + rest * rest) / (big_n * big_n);
  return {variance, bias_mass};
}

inline void check_self(std::span<const int> counts, std::size_t self) {
  if (self >= counts.size()) throw ValidationError("player is not a member of the coalition");
}

}  // namespace detail

template <class Real>
Real uniform_error(std::span<const int> counts, std::size_t self, const ErrorModel<Real>& model) {
  detail::check_self(counts, self);
  if (counts.size() == 1) return local_error(counts[0], model);
  const auto t = detail::uniform_terms(counts, self, model);
  return Real(t.variance + t.bias_mass * model.bias);
}

/// w = 0 is uniform federation, w = 1 is local learning.
template <class Real>
Real coarse_error(std::span<const int> counts, std::size_t self, const Real& w, const ErrorModel<Real>& model) {
  detail::check_self(counts, self);
  if (!(w >= Real(0) && w <= Real(1))) throw ValidationError("coarse weight outside [0,1]");
  if (counts.size() == 1) return local_error(counts[0], model);
  const auto t = detail::uniform_terms(counts, self, model);
  long long total = 0;
  for (const int n : counts) total += n;
  const Real share = Real(counts[self]) / Real(total);
  const Real one_minus = Real(1) - w;
  const Real self_mult = model.multiplier(counts[self]);
  const Real variance = one_minus * one_minus * t.variance + (w * w + Real(2) * one_minus * w * share) * self_mult;
  return Real(variance + one_minus * one_minus * t.bias_mass * model.bias);
}

/// `row` holds one weight per coalition member (same order as `counts`) and
/// must sum to 1 within 1e-12.
template <class Real>
Real fine_error(std::span<const int> counts, std::size_t self, std::span<const Real> row,
                const ErrorModel<Real>& model) {
  detail::check_self(counts, self);
  if (row.size() != counts.size()) throw ValidationError("fine row needs one weight per coalition member");
  Real sum(0);
  for (const auto& v : row) sum += v;
  const Real deviation = sum > Real(1) ? Real(sum - Real(1)) : Real(Real(1) - sum);
  if (!(deviation <= Real(1e-12))) throw ValidationError("fine row does not sum to 1");
  Real variance(0);
  Real off_sq(0);
  Real off_sum(0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    variance += row[i] * row[i] * model.multiplier(counts[i]);
    if (i != self) {
      off_sq += row[i] * row[i];
      off_sum += row[i];
    }
  }
  return Real(variance + (off_sq + off_sum * off_sum) * model.bias);
}

// ---------------------------------------------------------------------------
// Config-level API (double precision).

/// Per-player expected MSE indexed by player.
struct ErrorReport {
  std::vector<double> errors;
};

/// Sample counts of the members of `c`, in member order.
std::vector<int> coalition_counts(const Coalition& c, const GameConfig& config);

double mse_local(PlayerIndex j, const GameConfig& config);
double mse_uniform(PlayerIndex j, const Coalition& c, const GameConfig& config);
double mse_coarse(PlayerIndex j, const Coalition& c, double w, const GameConfig& config);
double mse_fine(PlayerIndex j, const Coalition& c, std::span<const double> v_row, const GameConfig& config);

/// Linear-regression branch for explicitly weighted schemes; requires
/// config.linreg. Optimal schemes are rejected.
double mse_linreg(PlayerIndex j, const Coalition& c, const FederationScheme& scheme, const GameConfig& config);

/// Error of player j inside coalition c under `scheme` (optimal schemes are
/// resolved through the weights module).
double scheme_error(PlayerIndex j, const Coalition& c, const FederationScheme& scheme, const GameConfig& config);

/// Evaluates every player within its own coalition of `p`.
ErrorReport player_errors(const Partition& p, const FederationScheme& scheme, const GameConfig& config);

}  // namespace modelshare

#endif  // MODELSHARE_ERRORS_HPP
