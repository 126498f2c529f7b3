#include "dex/rational.hpp"

#include <cstdlib>
#include <sstream>

#include "dex/errors.hpp"

namespace dex {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ParseError("empty rational literal");
  auto slash = text.find('/');
  try {
    size_t used = 0;
    if (slash == std::string::npos) {
      long long p = std::stoll(text, &used);
      if (used != text.size()) throw ParseError("trailing characters in rational '" + text + "'");
      return Rational(p);
    }
    long long p = std::stoll(text.substr(0, slash), &used);
    if (used != slash) throw ParseError("bad numerator in rational '" + text + "'");
    std::string den = text.substr(slash + 1);
    long long q = std::stoll(den, &used);
    if (used != den.size()) throw ParseError("bad denominator in rational '" + text + "'");
    if (q == 0) throw ParseError("zero denominator in rational '" + text + "'");
    return Rational(p, q);
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed rational '" + text + "'");
  } catch (const std::out_of_range&) {
    throw ParseError("rational out of range '" + text + "'");
  }
}

std::string format_rational(const Rational& r) {
  std::ostringstream out;
  out << r.numerator() << '/' << r.denominator();
  return out.str();
}

long long rational_ceil(const Rational& r) {
  long long p = r.numerator(), q = r.denominator();  // q > 0 after normalization
  long long d = p / q;
  if (p % q != 0 && p > 0) ++d;
  return d;
}

const Rational& ExtValue::finite() const {
  if (!value_.has_value()) throw InputError("expected a finite utility value, got -inf");
  return *value_;
}

std::string ExtValue::str() const {
  return value_.has_value() ? format_rational(*value_) : std::string("-inf");
}

ExtValue parse_ext_value(const std::string& text) {
  if (text == "-inf") return ExtValue::neg_inf();
  return ExtValue(parse_rational(text));
}

}  // namespace dex
