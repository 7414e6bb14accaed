#pragma once

#include <map>
#include <string>
#include <string_view>

#include "flexlab/rational.hpp"

namespace flexlab {

/// Element of a real multi-quadratic extension of the rationals: a finite sum
/// sum_d q_d * sqrt(d) with every d a squarefree positive integer (d = 1 is
/// the rational part) and every q_d a nonzero rational. Since square roots of
/// distinct squarefree integers are linearly independent over Q, the term map
/// is a canonical form and operator== decides exact equality.
class QuadExt {
 public:
  QuadExt() = default;
  QuadExt(const Rational& q) { set_term(1, q); }
  QuadExt(long n) : QuadExt(Rational(n)) {}

  /// q * sqrt(d); d may carry square factors, they are folded into q.
  static QuadExt radical(const Rational& coeff, const Integer& d);

  const std::map<long, Rational>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  /// Coefficient of sqrt(d) (zero if absent).
  Rational coeff(long d) const;
  Rational rational_part() const { return coeff(1); }

  QuadExt operator-() const;
  QuadExt& operator+=(const QuadExt& o);
  QuadExt& operator-=(const QuadExt& o);
  QuadExt& operator*=(const QuadExt& o);

  friend QuadExt operator+(QuadExt a, const QuadExt& b) { return a += b; }
  friend QuadExt operator-(QuadExt a, const QuadExt& b) { return a -= b; }
  friend QuadExt operator*(QuadExt a, const QuadExt& b) { return a *= b; }
  friend bool operator==(const QuadExt& a, const QuadExt& b) { return a.terms_ == b.terms_; }

  /// Exact reciprocal via iterated conjugation. Throws std::domain_error on
  /// zero and std::length_error when the radicands need more than
  /// kMaxGenerators coprime generators.
  QuadExt inverse() const;

  /// Floating value within `abs_err` of the exact one (extended precision
  /// internally). abs_err must be positive.
  double eval(double abs_err = 1e-17) const;

  std::string str() const;
  static QuadExt parse(std::string_view text);

  static constexpr int kMaxGenerators = 8;

 private:
  void set_term(long d, const Rational& q);
  std::map<long, Rational> terms_;
};

inline QuadExt invert(const QuadExt& a) { return a.inverse(); }
inline QuadExt operator/(const QuadExt& a, const QuadExt& b) { return a * b.inverse(); }

/// Exact square root of a nonnegative rational as s*sqrt(d), d squarefree.
/// Squarefree extraction is trial division up to 10^6 followed by a
/// perfect-square test of the cofactor; anything else throws
/// std::length_error (capacity, not silence), negative input throws
/// std::domain_error.
QuadExt sqrt_rational(const Rational& q);

}  // namespace flexlab
