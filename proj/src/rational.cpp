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

#include "modelshare/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace modelshare {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(int exponent) {
  cpp_int result = 1;
  for (int i = 0; i < exponent; ++i) result *= 10;
  return result;
}

// Parses [+-]digits[.digits][e[+-]digits] exactly.
Rational parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  cpp_int digits = 0;
  int fraction_digits = 0;
  bool any_digit = false;
  bool seen_dot = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any_digit = true;
      if (seen_dot) ++fraction_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw std::invalid_argument("not a number: '" + std::string(text) + "'");

  int exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    bool exp_digit = false;
    for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
      exponent = exponent * 10 + (text[pos] - '0');
      exp_digit = true;
      if (exponent > 4000) throw std::invalid_argument("exponent out of range");
    }
    if (!exp_digit) throw std::invalid_argument("malformed exponent: '" + std::string(text) + "'");
    if (exp_negative) exponent = -exponent;
  }
  if (pos != text.size()) throw std::invalid_argument("trailing characters in '" + std::string(text) + "'");

  const int scale = exponent - fraction_digits;
  Rational value = scale >= 0 ? Rational(digits * pow10(scale)) : Rational(digits, pow10(-scale));
  return negative ? Rational(-value) : value;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

}  // namespace

Rational to_rational(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("cannot convert a non-finite double to a rational");
  if (value == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);  // value = mantissa * 2^exponent
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  cpp_int numerator = scaled;
  cpp_int denominator = 1;
  if (exponent >= 0) {
    numerator <<= exponent;
  } else {
    denominator <<= -exponent;
  }
  return Rational(numerator, denominator);
}

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty rational");
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational numerator = parse_decimal(trim(text.substr(0, slash)));
  const Rational denominator = parse_decimal(trim(text.substr(slash + 1)));
  if (denominator == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return numerator / denominator;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::string to_string(const Rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace modelshare
