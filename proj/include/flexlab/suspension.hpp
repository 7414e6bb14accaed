#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>

#include "flexlab/elliptic.hpp"
#include "flexlab/polyhedron.hpp"
#include "flexlab/quadext.hpp"

namespace flexlab {

/// Input data for a flexible suspension with a hexagonal equator: the cubic,
/// four named basepoints, and for each j = 1..6 the integer words resolving
/// Q_{j,-}, Q_{j+1,+}, Q'_{j,-}, Q'_{j+1,+} (indices mod 6).
struct SuspensionSpec {
  Curve curve;
  std::map<std::string, CurvePoint> basepoints;

  struct Row {
    Word q_minus;        // Q_{j,-}
    Word q_plus_next;    // Q_{j+1,+}
    Word qp_minus;       // Q'_{j,-}
    Word qp_plus_next;   // Q'_{j+1,+}
  };
  std::array<Row, 6> rows;
  int sigma1 = -1;
};

struct ConditionError : std::runtime_error {
  ConditionError(std::string condition_, int j_, const std::string& detail)
      : std::runtime_error("condition " + condition_ + " fails at j=" + std::to_string(j_) +
                           ": " + detail),
        condition(std::move(condition_)),
        j(j_) {}
  std::string condition;
  int j;
};

/// Fully resolved suspension: the 24 curve points, per-j parabolas and signs,
/// and the exact edge lengths. All checks behind build() are exact.
struct SuspensionModel {
  Curve curve;
  std::array<CurvePoint, 6> q_minus, q_plus, qp_minus, qp_plus;  // index j-1
  std::array<Rational, 6> r, r_prime;        // x-coordinates of Q_j, Q'_j
  std::array<Rational, 6> par_a, par_b, par_c;
  std::array<int, 6> s, sigma;
  std::array<QuadExt, 6> sqrt_r, sqrt_r_prime;
  std::array<QuadExt, 6> len_south, len_north, len_equator;  // |p_k S|, |p_k N|, |p_k p_{k+1}|

  double x_min() const { return to_double(curve.b_prime); }
  double x_max() const { return to_double(curve.b); }
};

SuspensionModel build(const SuspensionSpec& spec);

/// Unit-modulus factor F_j(x) on (b', b); arg F_j is the dihedral angle
/// between the half-planes N S p_j and N S p_{j+1}. j is 1-based.
std::complex<double> suspension_F(const SuspensionModel& m, int j, double x);

/// The hexagonal-bipyramid complex on vertices N, S, p1..p6 with north faces
/// (N, p_j, p_{j+1}) and south faces (S, p_{j+1}, p_j).
PseudoManifold bipyramid_complex();

/// Vertex placement of the flexion at parameter x in (b', b), on
/// bipyramid_complex() in E^3.
Polyhedron vertices_at(const SuspensionModel& m, double x);

/// Exact edge lengths keyed on bipyramid_complex() vertex indices, with
/// floating values evaluated alongside.
EdgeLengths exact_edge_lengths(const SuspensionModel& m);

/// Spherical quadrangle cut on the unit sphere centred at p_k by the four
/// incident faces. Sides are the planar angles at p_k, one per face,
/// x-independent since they only involve edge lengths. Vertex labels name
/// the edge directions in cyclic order.
struct LinkQuadrangle {
  int k = 0;
  std::array<std::string, 4> side_name;  // e.g. "angle(N p5 p6)"
  std::array<QuadExt, 4> cos_exact;
  std::array<double, 4> side;            // arccos of the exact cosines
};

LinkQuadrangle link_quadrangle(const SuspensionModel& m, int k, double x);

/// Continuous branches of the four angles the flexion analysis tracks,
/// anchored near the flat configuration: phi_2, phi_5 near +pi and
/// phi_{1,2} = phi_{4,5} near 0.
struct AngleProfiles {
  Eigen::VectorXd x;
  Eigen::VectorXd phi2, phi5, phi12, phi45;
  std::string classify(const Eigen::VectorXd& v) const;  // "increasing" / "decreasing" / "constant" / "mixed"
};

AngleProfiles angle_profiles(const SuspensionModel& m, int samples, double x_lo, double x_hi);

/// The data of the paper's example suspension as machine-readable text
/// (identical to data/suspension_paper.json).
SuspensionSpec paper_suspension_spec();

}  // namespace flexlab
