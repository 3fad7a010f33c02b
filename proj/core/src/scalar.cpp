// SPDX-License-Identifier: Apache-2.0
#include "capid/scalar.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "capid/error.hpp"

namespace capid {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// The string constructor reads a leading 0 as an octal prefix.
boost::multiprecision::mpz_int decimal_integer(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return 0;
  return boost::multiprecision::mpz_int{std::string(digits.substr(first))};
}

boost::multiprecision::mpz_int parse_integer(std::string_view s, std::string_view whole) {
  std::string_view digits = s;
  bool neg = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    neg = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (!all_digits(digits)) {
    throw ValidationError("malformed number: '" + std::string(whole) + "'");
  }
  boost::multiprecision::mpz_int v = decimal_integer(digits);
  return neg ? boost::multiprecision::mpz_int(-v) : v;
}

Rational pow10(long exponent) {
  Rational base(1);
  boost::multiprecision::mpz_int ten_pow = boost::multiprecision::pow(
      boost::multiprecision::mpz_int(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) {
    base = Rational(ten_pow);
  } else {
    base = Rational(boost::multiprecision::mpz_int(1), ten_pow);
  }
  return base;
}

// Decimal literal: [sign] digits [. digits] [e|E [sign] digits]
Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    s = s.substr(0, e);
    auto v = parse_integer(exp_text, text);
    if (abs(v) > 4096) throw ValidationError("exponent out of range: '" + std::string(text) + "'");
    exponent = v.convert_to<long>();
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
      throw ValidationError("malformed number: '" + std::string(text) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) throw ValidationError("malformed number: '" + std::string(text) + "'");
    digits = std::string(s);
  }
  Rational value{decimal_integer(digits)};
  value *= pow10(exponent);
  return neg ? Rational(-value) : value;
}

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw ValidationError("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_integer(text.substr(0, slash), text);
    auto den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw ValidationError("zero denominator: '" + std::string(text) + "'");
    return Rational(num, den);
  }
  return parse_decimal(text);
}

}  // namespace

template <>
Rational parse_scalar<Rational>(std::string_view text) {
  return parse_rational(text);
}

template <>
double parse_scalar<double>(std::string_view text) {
  return to_double(parse_rational(text));
}

template <>
std::string format_scalar<Rational>(const Rational& value) {
  return value.str();
}

template <>
std::string format_scalar<double>(const double& value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buf, end);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw ValidationError("non-finite number");
  return parse_rational(format_scalar<double>(value));
}

double to_double(const Rational& value) {
  return value.convert_to<double>();
}

}  // namespace capid
