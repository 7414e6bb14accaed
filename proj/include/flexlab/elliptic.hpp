#pragma once

#include <map>
#include <string>

#include "flexlab/rational.hpp"

namespace flexlab {

/// Real cubic y^2 = x(x - b')(x - b) with 0 < b' < b. Its real locus has a
/// compact oval over [0, b'] and an unbounded branch over [b, inf).
struct Curve {
  Rational b_prime;
  Rational b;

  Curve(Rational bp, Rational bb) : b_prime(std::move(bp)), b(std::move(bb)) {
    if (!(0 < b_prime && b_prime < b))
      throw std::invalid_argument("curve requires 0 < b' < b");
  }
};

/// Rational point of the cubic, affine or the neutral point at infinity.
class CurvePoint {
 public:
  CurvePoint() : infinite_(true) {}
  CurvePoint(Rational x, Rational y) : infinite_(false), x_(std::move(x)), y_(std::move(y)) {}
  static CurvePoint infinity() { return CurvePoint(); }

  bool is_infinity() const { return infinite_; }
  const Rational& x() const { return require_affine(), x_; }
  const Rational& y() const { return require_affine(), y_; }

  friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.x_ == b.x_ && a.y_ == b.y_;
  }

  std::string str() const;

 private:
  void require_affine() const {
    if (infinite_) throw std::logic_error("coordinates of the point at infinity");
  }
  bool infinite_;
  Rational x_, y_;
};

bool on_curve(const Curve& e, const CurvePoint& p);

CurvePoint neg(const CurvePoint& p);

/// Chord-tangent addition; both points must lie on the curve (checked
/// exactly, off-curve input throws).
CurvePoint add(const Curve& e, const CurvePoint& p, const CurvePoint& q);

/// Integer word over named basepoints, e.g. {A:1, B:-1, C:1} for A - B + C.
using Word = std::map<std::string, int>;

CurvePoint combo(const Curve& e, const Word& word,
                 const std::map<std::string, CurvePoint>& basepoints);

enum class Component { compact, noncompact };

/// Which real component carries an affine point: the oval (0 <= x <= b') or
/// the unbounded branch (x >= b).
Component component(const Curve& e, const CurvePoint& p);

std::string word_str(const Word& w);

}  // namespace flexlab
