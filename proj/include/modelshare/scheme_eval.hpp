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

#ifndef MODELSHARE_SCHEME_EVAL_HPP
#define MODELSHARE_SCHEME_EVAL_HPP

#include <span>
#include <type_traits>
#include <variant>
#include <vector>

#include "modelshare/weights.hpp"

namespace modelshare {

template <class Real>
Real from_double(double value) {
  if constexpr (std::is_same_v<Real, Rational>) {
    return to_rational(value);
  } else {
    return static_cast<Real>(value);
  }
}

/// Error of global player `j`, sitting at `self` within a coalition whose
/// member sample counts are `counts`.
template <class Real>
Real evaluate_scheme(std::span<const int> counts, std::size_t self, PlayerIndex j, const FederationScheme& scheme,
                     const ErrorModel<Real>& model) {
  if (std::holds_alternative<LocalScheme>(scheme)) return local_error(counts[self], model);
  if (std::holds_alternative<UniformScheme>(scheme)) return uniform_error(counts, self, model);
  if (const auto* coarse = std::get_if<CoarseScheme>(&scheme)) {
    if (j >= coarse->weights.size()) throw ValidationError("scheme.weights: missing coarse weight");
    return coarse_error(counts, self, from_double<Real>(coarse->weights[j]), model);
  }
  if (std::holds_alternative<CoarseOptimalScheme>(scheme)) return optimal_coarse_error(counts, self, model);
  if (const auto* fine = std::get_if<FineScheme>(&scheme)) {
    const auto it = fine->rows.find(j);
    if (it == fine->rows.end()) throw ValidationError("scheme.weights: missing fine row");
    std::vector<Real> row;
    row.reserve(it->second.size());
    for (const double v : it->second) row.push_back(from_double<Real>(v));
    return fine_error<Real>(counts, self, row, model);
  }
  return optimal_fine_error(counts, self, model);
}

}  // namespace modelshare

#endif  // MODELSHARE_SCHEME_EVAL_HPP
