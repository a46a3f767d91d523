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

// Reference implementations used only by the tests. They are written from
// the underlying statistics (estimators as weighted sums of noisy local
// estimates) rather than from the library's closed forms.

#ifndef MODELSHARE_TESTS_ORACLES_HPP
#define MODELSHARE_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "modelshare/core_model.hpp"

namespace oracle {

using modelshare::PlayerIndex;

/// Noise variance of a player's local estimate.
inline double local_variance(int n, double mu_e, int dim) { return dim == 0 ? mu_e / n : mu_e * dim / (n - dim - 1); }

/// E[(sum_i v_i local_i - theta_j)^2] with local_i = theta_i + noise_i,
/// theta_i iid with variance `bias`, independent noises. Writing the error
/// as sum_i (v_i - [i==j]) theta_i + sum_i v_i noise_i gives the result.
inline double combination_error(const std::vector<int>& counts, std::size_t self, const std::vector<double>& v,
                                double mu_e, double bias, int dim = 0) {
  double out = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double a = v[i] - (i == self ? 1.0 : 0.0);
    out += bias * a * a + v[i] * v[i] * local_variance(counts[i], mu_e, dim);
  }
  return out;
}

inline std::vector<double> uniform_row(const std::vector<int>& counts) {
  double total = 0.0;
  for (const int n : counts) total += n;
  std::vector<double> v;
  for (const int n : counts) v.push_back(n / total);
  return v;
}

inline std::vector<double> coarse_row(const std::vector<int>& counts, std::size_t self, double w) {
  auto v = uniform_row(counts);
  for (auto& x : v) x *= 1.0 - w;
  v[self] += w;
  return v;
}

/// The coarse error is quadratic in w: fit it through three points and take
/// the clamped vertex.
inline double best_coarse_weight(const std::vector<int>& counts, std::size_t self, double mu_e, double bias,
                                 int dim = 0) {
  if (counts.size() == 1) return 1.0;
  auto f = [&](double w) { return combination_error(counts, self, coarse_row(counts, self, w), mu_e, bias, dim); };
  const double f0 = f(0.0), fh = f(0.5), f1 = f(1.0);
  const double curvature = 4.0 * (f0 - 2.0 * fh + f1);  // f'' of the parabola
  const double slope0 = -3.0 * f0 + 4.0 * fh - f1;      // f'(0)
  if (curvature <= 0.0) return f1 <= f0 ? 1.0 : 0.0;
  const double w = -slope0 / curvature;
  return std::min(1.0, std::max(0.0, w));
}

inline double best_coarse_error(const std::vector<int>& counts, std::size_t self, double mu_e, double bias,
                                int dim = 0) {
  return combination_error(counts, self, coarse_row(counts, self, best_coarse_weight(counts, self, mu_e, bias, dim)),
                           mu_e, bias, dim);
}

/// Minimizes the fine error over the affine set sum v = 1 by solving the
/// KKT system of the quadratic program directly.
inline std::vector<double> best_fine_row(const std::vector<int>& counts, std::size_t self, double mu_e, double bias,
                                         int dim = 0) {
  const int k = static_cast<int>(counts.size());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  for (int i = 0; i < k; ++i) {
    kkt(i, i) = 2.0 * (bias + local_variance(counts[i], mu_e, dim));
    kkt(i, k) = -1.0;
    kkt(k, i) = 1.0;
  }
  rhs[static_cast<int>(self)] = 2.0 * bias;
  rhs[k] = 1.0;
  const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
  return std::vector<double>(sol.data(), sol.data() + k);
}

inline double best_fine_error(const std::vector<int>& counts, std::size_t self, double mu_e, double bias, int dim = 0) {
  return combination_error(counts, self, best_fine_row(counts, self, mu_e, bias, dim), mu_e, bias, dim);
}

/// Every set partition of {0..m-1}, built by inserting each element into an
/// existing block or a new one. Blocks are lists of members.
inline std::vector<std::vector<std::vector<PlayerIndex>>> all_partitions(std::size_t m) {
  std::vector<std::vector<std::vector<PlayerIndex>>> out;
  std::vector<std::vector<PlayerIndex>> blocks;
  std::function<void(PlayerIndex)> place = [&](PlayerIndex x) {
    if (x == m) {
      out.push_back(blocks);
      return;
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      blocks[i].push_back(x);
      place(x + 1);
      blocks[i].pop_back();
    }
    blocks.push_back({x});
    place(x + 1);
    blocks.pop_back();
  };
  place(0);
  return out;
}

/// Bell numbers from the recurrence B(n+1) = sum_k C(n,k) B(k).
inline std::uint64_t bell(std::size_t n) {
  std::vector<std::uint64_t> b{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t next = 0;
    std::uint64_t binom = 1;
    for (std::size_t k = 0; k <= i; ++k) {
      next += binom * b[k];
      binom = binom * (i - k) / (k + 1);
    }
    b.push_back(next);
  }
  return b[n];
}

/// Error of player j inside the member list `members` (sorted).
using ErrorFn = std::function<double(PlayerIndex j, const std::vector<PlayerIndex>& members)>;

enum class Notion { Core, Strict, Individual };

/// Brute-force stability of `blocks` under `err`, with the library's
/// default epsilon comparisons.
inline bool is_stable(const std::vector<std::vector<PlayerIndex>>& blocks, std::size_t m, const ErrorFn& err,
                      Notion notion, double eps = 1e-9) {
  auto strict = [eps](double now, double before) { return now < before * (1.0 - eps) - 1e-15; };
  auto weak = [eps](double now, double before) { return now <= before * (1.0 + eps); };
  std::vector<double> current(m);
  std::vector<std::size_t> owner(m);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (const auto j : blocks[b]) {
      current[j] = err(j, blocks[b]);
      owner[j] = b;
    }
  }
  if (notion == Notion::Individual) {
    for (PlayerIndex i = 0; i < m; ++i) {
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (b == owner[i]) continue;
        auto grown = blocks[b];
        grown.push_back(i);
        std::sort(grown.begin(), grown.end());
        if (!strict(err(i, grown), current[i])) continue;
        bool ok = true;
        for (const auto k : blocks[b]) ok = ok && weak(err(k, grown), current[k]);
        if (ok) return false;
      }
      if (blocks[owner[i]].size() > 1 && strict(err(i, {i}), current[i])) return false;
    }
    return true;
  }
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<PlayerIndex> members;
    for (PlayerIndex j = 0; j < m; ++j) {
      if (mask >> j & 1) members.push_back(j);
    }
    bool all = true;
    bool any_strict = false;
    for (const auto j : members) {
      const double now = err(j, members);
      if (notion == Notion::Core) {
        all = all && strict(now, current[j]);
      } else {
        all = all && weak(now, current[j]);
        any_strict = any_strict || strict(now, current[j]);
      }
    }
    if (all && (notion == Notion::Core || any_strict)) return false;
  }
  return true;
}

enum class Scheme { Local, Uniform, CoarseOptimal, FineOptimal };

/// Oracle error function for a population under one of the coalition-wide
/// schemes.
inline ErrorFn error_fn(const std::vector<int>& players, double mu_e, double bias, Scheme scheme, int dim = 0) {
  return [=](PlayerIndex j, const std::vector<PlayerIndex>& members) {
    std::vector<int> counts;
    std::size_t self = 0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (members[k] == j) self = k;
      counts.push_back(players[members[k]]);
    }
    switch (scheme) {
      case Scheme::Local:
        return local_variance(counts[self], mu_e, dim);
      case Scheme::Uniform:
        return combination_error(counts, self, uniform_row(counts), mu_e, bias, dim);
      case Scheme::CoarseOptimal:
        return best_coarse_error(counts, self, mu_e, bias, dim);
      case Scheme::FineOptimal:
        return best_fine_error(counts, self, mu_e, bias, dim);
    }
    return 0.0;
  };
}

}  // namespace oracle

#endif  // MODELSHARE_TESTS_ORACLES_HPP
