// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <concepts>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace capid {

// Expression templates off so arithmetic results deduce as Rational.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// The two arithmetic modes: exact rationals and doubles with an absolute
/// tolerance of 1e-9 on every comparison.
template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

template <Scalar T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* mode_name = "exact";
  static Rational tolerance() { return Rational(0); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* mode_name = "float";
  static double tolerance() { return 1e-9; }
};

template <Scalar T>
bool approx_eq(const T& a, const T& b) {
  if constexpr (ScalarTraits<T>::exact) {
    return a == b;
  } else {
    return a - b <= ScalarTraits<T>::tolerance() && b - a <= ScalarTraits<T>::tolerance();
  }
}

/// a >= b up to tolerance.
template <Scalar T>
bool approx_ge(const T& a, const T& b) {
  if constexpr (ScalarTraits<T>::exact) {
    return a >= b;
  } else {
    return a >= b - ScalarTraits<T>::tolerance();
  }
}

template <Scalar T>
bool approx_le(const T& a, const T& b) {
  return approx_ge(b, a);
}

/// a > b by more than the tolerance.
template <Scalar T>
bool definitely_gt(const T& a, const T& b) {
  return !approx_le(a, b);
}

template <Scalar T>
bool is_zero(const T& a) {
  return approx_eq(a, T(0));
}

/// Parses "p/q", integers, and decimal literals with optional exponent
/// ("0.15", "-2.5e-3"). In exact mode decimals are converted without rounding.
/// Throws ValidationError on malformed text or a zero denominator.
template <Scalar T>
T parse_scalar(std::string_view text);

/// Exact mode: "p/q" (or "p" for integers). Float mode: shortest decimal that
/// round-trips.
template <Scalar T>
std::string format_scalar(const T& value);

/// Shortest round-trip decimal text of a double, parsed exactly.
Rational rational_from_double(double value);

double to_double(const Rational& value);
inline double to_double(double value) { return value; }

template <Scalar T>
T convert_from_rational(const Rational& value) {
  if constexpr (std::same_as<T, Rational>) {
    return value;
  } else {
    return to_double(value);
  }
}

}  // namespace capid
