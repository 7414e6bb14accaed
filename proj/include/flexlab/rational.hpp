#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace flexlab {

/// Exact rational scalar. GMP keeps the num/den reduced with den > 0,
/// which is exactly the canonical form we need everywhere.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline int sign(const Rational& q) { return sgn(q); }

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline double to_double(const Rational& q) { return q.get_d(); }

/// Parses "p", "-p", or "p/q" (q > 0 after reduction). Throws on malformed text.
Rational parse_rational(std::string_view text);

/// "p" or "p/q", canonical.
std::string format_rational(const Rational& q);

/// floor(sqrt(n)) for n >= 0.
Integer isqrt(const Integer& n);

bool is_perfect_square(const Integer& n);

}  // namespace flexlab
