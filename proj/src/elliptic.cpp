#include "flexlab/elliptic.hpp"

#include <cstdlib>

namespace flexlab {

std::string CurvePoint::str() const {
  if (infinite_) return "O";
  return "(" + format_rational(x_) + ", " + format_rational(y_) + ")";
}

bool on_curve(const Curve& e, const CurvePoint& p) {
  if (p.is_infinity()) return true;
  return p.y() * p.y() == p.x() * (p.x() - e.b_prime) * (p.x() - e.b);
}

CurvePoint neg(const CurvePoint& p) {
  if (p.is_infinity()) return p;
  return {p.x(), -p.y()};
}

CurvePoint add(const Curve& e, const CurvePoint& p, const CurvePoint& q) {
  if (!on_curve(e, p)) throw std::invalid_argument("addition input " + p.str() + " is off the curve");
  if (!on_curve(e, q)) throw std::invalid_argument("addition input " + q.str() + " is off the curve");
  if (p.is_infinity()) return q;
  if (q.is_infinity()) return p;

  // y^2 = x^3 + a2 x^2 + a4 x with a2 = -(b' + b), a4 = b'b
  const Rational a2 = -(e.b_prime + e.b);
  const Rational a4 = e.b_prime * e.b;

  Rational lambda;
  if (p.x() == q.x()) {
    if (p.y() == -q.y()) return CurvePoint::infinity();  // includes the 2-torsion tangent
    lambda = (3 * p.x() * p.x() + 2 * a2 * p.x() + a4) / (2 * p.y());
  } else {
    lambda = (q.y() - p.y()) / (q.x() - p.x());
  }
  Rational x3 = lambda * lambda - a2 - p.x() - q.x();
  Rational y3 = lambda * (p.x() - x3) - p.y();
  return {std::move(x3), std::move(y3)};
}

CurvePoint combo(const Curve& e, const Word& word,
                 const std::map<std::string, CurvePoint>& basepoints) {
  CurvePoint acc = CurvePoint::infinity();
  for (const auto& [name, c] : word) {
    auto it = basepoints.find(name);
    if (it == basepoints.end()) throw std::invalid_argument("unknown basepoint '" + name + "'");
    if (!on_curve(e, it->second))
      throw std::invalid_argument("basepoint " + name + " = " + it->second.str() + " is off the curve");
    if (c == 0) continue;

    // binary double-and-add on |c|
    CurvePoint scaled = CurvePoint::infinity();
    CurvePoint doubling = it->second;
    for (unsigned long m = static_cast<unsigned long>(std::abs(c)); m; m >>= 1) {
      if (m & 1) scaled = add(e, scaled, doubling);
      if (m > 1) doubling = add(e, doubling, doubling);
    }
    if (c < 0) scaled = neg(scaled);
    acc = add(e, acc, scaled);
  }
  return acc;
}

Component component(const Curve& e, const CurvePoint& p) {
  if (p.is_infinity()) return Component::noncompact;
  if (0 <= p.x() && p.x() <= e.b_prime) return Component::compact;
  if (p.x() >= e.b) return Component::noncompact;
  throw std::logic_error("point " + p.str() + " off both real components");
}

std::string word_str(const Word& w) {
  std::string out;
  for (const auto& [name, c] : w) {
    if (c == 0) continue;
    if (!out.empty()) out += c > 0 ? " + " : " - ";
    else if (c < 0) out += "-";
    int m = std::abs(c);
    if (m != 1) out += std::to_string(m) + "*";
    out += name;
  }
  return out.empty() ? "0" : out;
}

}  // namespace flexlab
