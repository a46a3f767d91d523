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

#ifndef MODELSHARE_RATIONAL_HPP
#define MODELSHARE_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace modelshare {

/// Arbitrary-precision rational used by the exact comparison mode.
using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a binary double (every finite double is a dyadic rational).
Rational to_rational(double value);

/// Parses "p/q", an integer, or a finite decimal such as "0.125" exactly.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

double to_double(const Rational& value);

std::string to_string(const Rational& value);

}  // namespace modelshare

#endif  // MODELSHARE_RATIONAL_HPP
