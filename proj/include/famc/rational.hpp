#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace famc {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q" or "p" (optional leading '-'). The result is canonical, so
/// "2/4" reads as 1/2. Throws ParseError on anything else or on q = 0.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form, or "p" when the value is an integer.
std::string format_rational(const Rational& value);

/// Fixed-point rendering rounded half away from zero.
std::string format_decimal(const Rational& value, int places = 12);

bool is_integer(const Rational& value);
Integer floor_of(const Rational& value);
Integer ceil_of(const Rational& value);

// mpq_class(p, q) does not reduce; everything entering a container or a
// comparison goes through this first.
inline Rational canonical(Rational r) {
  r.canonicalize();
  return r;
}

inline Rational ratio(long p, long q) { return canonical(Rational(p, q)); }

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational out = 1;
  for (unsigned i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace famc
