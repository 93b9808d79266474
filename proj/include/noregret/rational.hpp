#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace noregret {

/// Exact arbitrary-precision rational used for every score, weight and
/// breakpoint in the discrete and Pareto code paths.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", integers, and finite decimals with an optional exponent
/// ("0.35", "-1.5e-3") into an exact rational. Throws std::invalid_argument
/// on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Exact conversion of a finite double (doubles are dyadic rationals).
Rational from_double(double value);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

/// Shortest decimal with at most `digits` significant digits, for summaries.
std::string to_decimal(const Rational& value, int digits = 10);

double to_double(const Rational& value);

Rational midpoint(const Rational& a, const Rational& b);

/// Closed interval [lo, hi] with exact endpoints.
struct Interval {
  Rational lo;
  Rational hi;

  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool is_point() const { return lo == hi; }
  Rational mid() const { return midpoint(lo, hi); }
  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace noregret
