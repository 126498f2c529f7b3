#pragma once

#include <boost/rational.hpp>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace dex {

using Rational = boost::rational<long long>;

// Parses "p/q", "p", or a plain integer string. Throws dex::ParseError on
// malformed input or zero denominator.
Rational parse_rational(const std::string& text);

// Canonical form "p/q" (denominator always present, sign on the numerator).
std::string format_rational(const Rational& r);

long long rational_ceil(const Rational& r);

// A utility value: either a rational or the bottom element -inf, which marks
// bundles outside an agent's consumption space. -inf compares below every
// rational and equal to itself.
class ExtValue {
 public:
  ExtValue() : value_(Rational(0)) {}
  ExtValue(Rational r) : value_(std::move(r)) {}
  ExtValue(long long n) : value_(Rational(n)) {}

  static ExtValue neg_inf() { return ExtValue(Bottom{}); }

  bool is_finite() const { return value_.has_value(); }
  const Rational& finite() const;  // throws if -inf

  friend bool operator==(const ExtValue& a, const ExtValue& b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(const ExtValue& a, const ExtValue& b) {
    if (!a.value_.has_value()) return b.value_.has_value();
    if (!b.value_.has_value()) return false;
    return *a.value_ < *b.value_;
  }
  friend bool operator!=(const ExtValue& a, const ExtValue& b) { return !(a == b); }
  friend bool operator>(const ExtValue& a, const ExtValue& b) { return b < a; }
  friend bool operator<=(const ExtValue& a, const ExtValue& b) { return !(b < a); }
  friend bool operator>=(const ExtValue& a, const ExtValue& b) { return !(a < b); }

  friend ExtValue max(const ExtValue& a, const ExtValue& b) { return a < b ? b : a; }

  std::string str() const;  // "p/q" or "-inf"

 private:
  struct Bottom {};
  explicit ExtValue(Bottom) : value_(std::nullopt) {}
  std::optional<Rational> value_;
};

// Parses "p/q", "p", or "-inf".
ExtValue parse_ext_value(const std::string& text);

}  // namespace dex
