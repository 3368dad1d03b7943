#include "infoval/scalar.hpp"

#include <cstdio>
#include <cstdlib>

namespace infoval {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw input_error("empty rational literal");
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      if (text.find('/', slash + 1) != std::string::npos)
        throw input_error("rational literal with multiple slashes: " + text);
      const Rational den(text.substr(slash + 1));
      if (den == 0) throw input_error("rational with zero denominator: " + text);
      return Rational(text.substr(0, slash)) / den;
    }
    const auto point = text.find('.');
    if (point == std::string::npos) return Rational(text);
    // Decimal literal: digits after the point scale the denominator.
    std::string digits = text.substr(0, point) + text.substr(point + 1);
    const std::size_t frac_len = text.size() - point - 1;
    if (frac_len == 0) return Rational(digits);
    Rational den{1};
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(digits) / den;
  } catch (const std::exception& e) {
    throw input_error(std::string("bad rational literal '") + text + "': " +
                      e.what());
  }
}

std::string format_rational(const Rational& v) {
  if (denominator(v) == 1) return numerator(v).str();
  return numerator(v).str() + "/" + denominator(v).str();
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw input_error("non-finite number in input");
  Rational r;
  mpq_set_d(r.backend().data(), v);
  return r;
}

double round_for_report(double v) {
  if (!std::isfinite(v)) return v;
  if (v == 0.0) return 0.0;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace infoval
