#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace infoval {

/// Arbitrary-precision rational used by the exact arithmetic mode.
/// Canonicalized (reduced, positive denominator) by the backend.
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;

/// Thrown when an input document or argument is malformed.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a requested construction does not apply to the instance
/// (preconditions hold formally but the geometry rules the operation out).
struct inapplicable_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when float-mode numerics fail irrecoverably.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Traits shared by the two arithmetic modes.  All strict comparisons in the
/// library route through these helpers so the float tolerance lives in one
/// place.
template <typename S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  /// Slack below which a strict inequality is considered violated.
  static constexpr double strict_tolerance = 1e-9;
  /// Distance below which two enumerated vertices are merged.
  static constexpr double merge_tolerance = 1e-9;
  static double from_int(long v) { return static_cast<double>(v); }
  static double from_ratio(long num, long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double to_double(double v) { return v; }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool is_exact = true;
  static inline const Rational strict_tolerance{0};
  static inline const Rational merge_tolerance{0};
  static Rational from_int(long v) { return Rational(v); }
  static Rational from_ratio(long num, long den) { return Rational(num, den); }
  static double to_double(const Rational& v) {
    return v.template convert_to<double>();
  }
};

/// a > b beyond the mode's strict tolerance.
template <typename S>
bool strictly_greater(const S& a, const S& b) {
  return a > b + scalar_traits<S>::strict_tolerance;
}

/// |a - b| within the mode's strict tolerance (exact equality in exact mode).
template <typename S>
bool approx_equal(const S& a, const S& b) {
  if constexpr (scalar_traits<S>::is_exact) {
    return a == b;
  } else {
    return std::abs(a - b) <= scalar_traits<S>::strict_tolerance;
  }
}

template <typename S>
S abs_value(const S& v) {
  using std::abs;
  return abs(v);
}

/// Parses "p/q" (or "p") into a rational.  Also accepts decimal strings with
/// a fractional part, read exactly (e.g. "0.25" -> 1/4).
Rational parse_rational(const std::string& text);

/// Canonical text form: "p" when the denominator is 1, else "p/q".
std::string format_rational(const Rational& v);

/// Exact rational value of a double (every finite double is rational).
Rational rational_from_double(double v);

/// Rounds to 12 significant digits; report serialization routes every float
/// through this so reruns are byte-identical.
double round_for_report(double v);

/// Dot product over std::vector; sizes must match.
template <typename S>
S dot(const std::vector<S>& a, const std::vector<S>& b) {
  if (a.size() != b.size())
    throw input_error("dot: dimension mismatch");
  S acc{0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace infoval
