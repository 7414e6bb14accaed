#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flexlab/polyhedron.hpp"

namespace flexlab {

/// Absolute tolerance for membership of vertices in the model surface.
inline constexpr double kGeoTol = 1e-9;

/// Measured edge lengths: Euclidean |x_u - x_v|, spherical arccos<x_u,x_v>,
/// hyperbolic arccosh<x_u,x_v>. Throws std::domain_error on degenerate edges
/// (coincident or antipodal vertices) and on model violations.
EdgeLengths edge_lengths(const Polyhedron& p);

/// Residuals of the configuration-space equations against a prescribed
/// length set, reported per equation family.
struct MembershipReport {
  double max_edge_residual = 0.0;  // | |x_u-x_v|^2 - l^2 | resp. |<x_u,x_v> - cos/cosh l|
  EdgeKey worst_edge{-1, -1};
  double max_model_residual = 0.0;  // |<x,x> - 1| per vertex (curved only)
  int worst_vertex = -1;
  bool sheet_ok = true;  // hyperbolic x_0 > 0
  double tolerance = 0.0;
  bool member() const {
    return max_edge_residual <= tolerance && max_model_residual <= tolerance && sheet_ok;
  }
};

MembershipReport sigma_membership(const Polyhedron& p, const EdgeLengths& lengths, double tol);

/// Realizability of every simplex of K with positive volume from lengths
/// alone: Cayley-Menger sign conditions (Euclidean) or Gram definiteness /
/// signature conditions (spherical / hyperbolic).
struct NondegeneracyReport {
  bool ok = true;
  std::vector<std::pair<std::vector<int>, bool>> per_simplex;
  std::optional<std::vector<int>> certificate;  // first failing simplex
};

NondegeneracyReport nondegenerate_lengths(const PseudoManifold& k, const EdgeLengths& lengths,
                                          const SpaceForm& space);

/// k-dimensional volume of the realized face (1 for vertices). Euclidean:
/// Gram/Cayley-Menger; curved: segment lengths only. Degenerate faces give 0
/// and set *degenerate.
double face_volume(const Polyhedron& p, const std::vector<int>& face, bool* degenerate = nullptr);

/// Oriented dihedral angle at a codimension-2 face, in (-pi, pi] mod 2pi.
/// The sign convention is fixed by the standard coordinate orientation of the
/// ambient space (radial-vector-first for the curved models); with outward
/// compatible orientation of an embedded convex polyhedron this reproduces
/// the classical interior dihedral angle.
double dihedral_angle(const Polyhedron& p, const Codim2Face& sigma);

/// Convenience: locate the two top simplices containing `sigma` first.
double dihedral_angle(const Polyhedron& p, const std::vector<int>& sigma);

/// Continuous-branch helper: representative of `angle` (mod 2pi) closest to
/// `previous`.
double unwrap_angle(double previous, double angle);

/// First-order rigidity data at P from the SVD of the constraint Jacobian.
struct RigidityReport {
  int jacobian_rank = 0;
  int trivial_motion_dim = 0;    // dimension of the isometry orbit at P
  int nontrivial_flex_dim = 0;   // dim ker J - orbit dimension
  bool orbit_degenerate = false; // orbit smaller than dim Isom(X^n)
  double sigma_max = 0.0;
};

RigidityReport rigidity(const Polyhedron& p);

}  // namespace flexlab
