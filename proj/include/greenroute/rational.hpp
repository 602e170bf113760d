#pragma once

// Exact rational arithmetic used for every coefficient, load and cost.
// Instance parameters arrive as decimal text and stay exact end-to-end.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace greenroute {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class NumberFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Integer pow10(std::size_t exponent) {
  Integer result = 1;
  for (std::size_t i = 0; i < exponent; ++i) result *= 10;
  return result;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

}  // namespace detail

/// Parses `[+-]digits[.digits][(e|E)[+-]digits]` or `[+-]digits/digits`
/// into an exact rational.
inline Rational parse_rational(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> NumberFormatError {
    return NumberFormatError("not an exact number: '" + original + "'");
  };
  if (text.empty()) throw fail();

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) throw fail();
    auto strip = [](std::string_view s) {
      return std::string(s.substr(std::min(s.find_first_not_of('0'), s.size() - 1)));
    };
    Integer d{strip(den)};
    if (d == 0) throw fail();
    Rational r(Integer{strip(num)}, d);
    return negative ? Rational(-r) : r;
  }

  long long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_text = text.substr(e + 1);
    text = text.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!detail::all_digits(exp_text) || exp_text.size() > 6) throw fail();
    std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (exp_negative) exponent = -exponent;
  }

  std::string digits;
  std::size_t fraction_digits = 0;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if ((!whole.empty() && !detail::all_digits(whole)) ||
        (!frac.empty() && !detail::all_digits(frac)) || (whole.empty() && frac.empty()))
      throw fail();
    digits = std::string(whole) + std::string(frac);
    fraction_digits = frac.size();
  } else {
    if (!detail::all_digits(text)) throw fail();
    digits = std::string(text);
  }

  // A leading zero would make the integer parser read octal.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  Integer numerator(digits);
  Integer denominator = 1;
  long long scale = static_cast<long long>(fraction_digits) - exponent;
  if (scale > 0)
    denominator = detail::pow10(static_cast<std::size_t>(scale));
  else if (scale < 0)
    numerator *= detail::pow10(static_cast<std::size_t>(-scale));
  Rational r(numerator, denominator);
  return negative ? Rational(-r) : r;
}

/// Converts a double to the rational of its shortest round-trip decimal
/// representation, so `2.5` in a JSON file becomes exactly 5/2.
inline Rational rational_from_double(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw NumberFormatError("cannot format floating-point value");
  return parse_rational(std::string_view(buffer, static_cast<std::size_t>(end - buffer)));
}

/// Exact decimal rendering, or nullopt when the expansion does not terminate.
inline std::optional<std::string> to_exact_decimal(const Rational& value) {
  Integer num = boost::multiprecision::numerator(value);
  Integer den = boost::multiprecision::denominator(value);
  std::size_t twos = 0, fives = 0;
  Integer rest = den;
  while (rest % 2 == 0) { rest /= 2; ++twos; }
  while (rest % 5 == 0) { rest /= 5; ++fives; }
  if (rest != 1) return std::nullopt;

  const std::size_t places = std::max(twos, fives);
  const bool negative = num < 0;
  if (negative) num = -num;
  Integer scaled = num * detail::pow10(places) / den;
  std::string digits = scaled.str();
  if (places > 0) {
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
  }
  return negative ? "-" + digits : digits;
}

/// Decimal rounded to `significant` digits; used only where the exact
/// expansion does not terminate.
inline std::string to_approx_decimal(const Rational& value, int significant = 12) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*Lg", significant, value.convert_to<long double>());
  return buffer;
}

/// Exact decimal when terminating, `p/q` otherwise.
inline std::string to_string(const Rational& value) {
  if (auto exact = to_exact_decimal(value)) return *exact;
  return value.str();
}

}  // namespace greenroute
