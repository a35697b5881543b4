#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "andreev/error.hpp"

namespace andreev {

/// Arbitrary-precision rational; angles are stored as multiples of pi.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p/q" or "p". The result is canonicalized.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0) fail(ErrorCode::InvalidInput, "bad rational '" + s + "'");
  if (r.get_den() == 0) fail(ErrorCode::InvalidInput, "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

/// Lowest-terms "p/q" (or "p" when the denominator is 1).
inline std::string format_rational(const Rational& r) {
  Rational c(r);
  c.canonicalize();
  return c.get_str(10);
}

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace andreev
