#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace flexlab {

enum class Space { euclidean, spherical, hyperbolic };

/// Space form in its vector model: E^n with Cartesian coordinates, S^n as the
/// unit sphere in R^{n+1}, L^n as the upper sheet of <x,x> = 1, x_0 > 0 in
/// R^{1,n}. The ambient scalar product is x0*y0 + eps*(x1*y1 + ... + xn*yn).
struct SpaceForm {
  Space kind = Space::euclidean;
  int n = 3;

  static SpaceForm euclidean(int n) { return {Space::euclidean, n}; }
  static SpaceForm spherical(int n) { return {Space::spherical, n}; }
  static SpaceForm hyperbolic(int n) { return {Space::hyperbolic, n}; }

  bool curved() const { return kind != Space::euclidean; }
  double epsilon() const {
    if (!curved()) throw std::logic_error("epsilon undefined for euclidean space");
    return kind == Space::spherical ? 1.0 : -1.0;
  }
  int ambient_dim() const { return curved() ? n + 1 : n; }

  /// Ambient (pseudo-)scalar product.
  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    if (!curved()) return a.dot(b);
    return a[0] * b[0] + epsilon() * a.tail(n).dot(b.tail(n));
  }

  /// Riemannian inner product on a tangent space of the model (positive
  /// definite on tangent vectors in both curved cases).
  double tangent_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return curved() ? epsilon() * inner(a, b) : a.dot(b);
  }
};

}  // namespace flexlab
