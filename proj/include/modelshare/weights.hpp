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

// Optimal personalization weights and the errors they attain.

#ifndef MODELSHARE_WEIGHTS_HPP
#define MODELSHARE_WEIGHTS_HPP

#include <map>
#include <span>
#include <vector>

#include "modelshare/errors.hpp"

namespace modelshare {

/// Minimizer of coarse_error over w in [0,1].
///
/// The coarse error is a convex quadratic a(1-w)^2 + c((1-2p)w^2 + 2pw) with
/// a = uniform error, c = m(n_j), p = n_j/N, so the unconstrained minimizer is
/// (a - cp) / (a + c - 2cp), clamped to [0,1]. For mean estimation this is
/// B sigma^2 / (mu_e N^2 (1/n_j - 1/N) + B sigma^2). A singleton coalition
/// returns 1 (every weight gives the local estimator).
template <class Real>
Real optimal_coarse_weight(std::span<const int> counts, std::size_t self, const ErrorModel<Real>& model) {
  detail::check_self(counts, self);
  if (counts.size() == 1) return Real(1);
  long long total = 0;
  for (const int n : counts) total += n;
  const auto t = detail::uniform_terms(counts, self, model);
  const Real a = t.variance + t.bias_mass * model.bias;
  const Real c = model.multiplier(counts[self]);
  const Real cp = c * Real(counts[self]) / Real(total);
  const Real curvature = a + c - Real(2) * cp;
  if (!(curvature > Real(0))) return Real(1);
  const Real w = (a - cp) / curvature;
  if (w < Real(0)) return Real(0);
  if (w > Real(1)) return Real(1);
  return w;
}

/// Error at the optimal coarse weight. Mean estimation uses the closed form
///   (mu_e (N - n_j) + B sigma^2) / ((N - n_j) N + n_j B sigma^2 / mu_e),
/// linear regression evaluates coarse_error at optimal_coarse_weight.
template <class Real>
Real optimal_coarse_error(std::span<const int> counts, std::size_t self, const ErrorModel<Real>& model) {
  detail::check_self(counts, self);
  if (counts.size() == 1) return local_error(counts[0], model);
  if (model.dim != 0) return coarse_error(counts, self, optimal_coarse_weight(counts, self, model), model);
  long long total = 0;
  long long sq_others = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    total += counts[i];
    if (i != self) sq_others += static_cast<long long>(counts[i]) * counts[i];
  }
  const long long rest = total - counts[self];
  const Real big_b(sq_others + rest * rest);
  const Real numerator = model.mu_e * Real(rest) + big_b * model.bias;
  const Real denominator = Real(rest) * Real(total) + Real(counts[self]) * big_b * model.bias / model.mu_e;
  return Real(numerator / denominator);
}

/// Fine-grained row minimizing player `self`'s error. With V_i = b + m(n_i)
/// and S = sum_{i != self} 1/V_i:
///   v_self = (1 + b S) / (1 + V_self S),
///   v_k    = (V_self - b) / (V_k (1 + V_self S)).
template <class Real>
std::vector<Real> optimal_fine_row(std::span<const int> counts, std::size_t self, const ErrorModel<Real>& model) {
  detail::check_self(counts, self);
  std::vector<Real> row(counts.size(), Real(0));
  if (counts.size() == 1) {
    row[0] = Real(1);
    return row;
  }
  std::vector<Real> v_total(counts.size());
  Real inv_sum(0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    v_total[i] = model.bias + model.multiplier(counts[i]);
    if (i != self) inv_sum += Real(1) / v_total[i];
  }
  const Real denom = Real(1) + v_total[self] * inv_sum;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i == self) {
      row[i] = (Real(1) + model.bias * inv_sum) / denom;
    } else {
      row[i] = (v_total[self] - model.bias) / (v_total[i] * denom);
    }
  }
  return row;
}

template <class Real>
Real optimal_fine_error(std::span<const int> counts, std::size_t self, const ErrorModel<Real>& model) {
  detail::check_self(counts, self);
  if (counts.size() == 1) return local_error(counts[0], model);
  const auto row = optimal_fine_row(counts, self, model);
  return fine_error<Real>(counts, self, row, model);
}

// ---------------------------------------------------------------------------
// Config-level API.

/// Optimal fine weights of one player over a coalition.
struct FineWeights {
  PlayerIndex player = 0;
  std::map<PlayerIndex, double> row;

  /// Weights in coalition member order.
  std::vector<double> as_row() const;
};

double optimal_w(PlayerIndex j, const Coalition& c, const GameConfig& config);
double optimal_coarse_mse(PlayerIndex j, const Coalition& c, const GameConfig& config);
FineWeights optimal_v(PlayerIndex j, const Coalition& c, const GameConfig& config);
double optimal_fine_mse(PlayerIndex j, const Coalition& c, const GameConfig& config);

}  // namespace modelshare

#endif  // MODELSHARE_WEIGHTS_HPP
