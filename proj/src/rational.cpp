#include "noregret/rational.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace noregret {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(long exponent) {
  cpp_int result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

[[noreturn]] void malformed(std::string_view text) {
  throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  cpp_int mantissa = 0;
  long fraction_digits = 0;
  bool seen_digit = false;
  bool seen_point = false;
  std::size_t i = 0;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_point) ++fraction_digits;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) malformed(text);

  long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') malformed(text);
    ++i;
    bool exp_negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      exp_negative = s[i] == '-';
      ++i;
    }
    if (i == s.size()) malformed(text);
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) malformed(text);
      exponent = exponent * 10 + (s[i] - '0');
      if (exponent > 4000) malformed(text);
    }
    if (exp_negative) exponent = -exponent;
  }

  const long shift = exponent - fraction_digits;
  Rational value = shift >= 0 ? Rational(mantissa * pow10(shift))
                              : Rational(mantissa, pow10(-shift));
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (text.empty()) malformed(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational num = parse_decimal(trim(text.substr(0, slash)));
  const Rational den = parse_decimal(trim(text.substr(slash + 1)));
  if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  return num / den;
}

Rational from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
  return Rational(value);
}

std::string to_string(const Rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_decimal(const Rational& value, int digits) {
  std::ostringstream out;
  out.precision(digits);
  out << to_double(value);
  return out.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational midpoint(const Rational& a, const Rational& b) { return (a + b) / 2; }

}  // namespace noregret
