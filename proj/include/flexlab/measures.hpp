#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "flexlab/geometry.hpp"
#include "flexlab/polyhedron.hpp"

namespace flexlab {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED0DE11A5ULL;

/// Linking number of {x, infinity} with the oriented surface cycle: signed
/// crossing count of a generic ray from x. Retries with fresh directions on
/// near-degenerate hits (up to 16), deterministic for a fixed seed.
/// Throws std::domain_error if x sits on the surface (within kGeoTol) and
/// std::runtime_error on persistent degeneracy.
int linking_number(const Polyhedron& p, const Eigen::Vector3d& x,
                   std::uint64_t seed = kDefaultSeed);

/// Generalized oriented volume in E^3 by the divergence form
/// (1/6) sum over oriented triangles of det(x_a, x_b, x_c).
double oriented_volume(const Polyhedron& p);

struct MonteCarloVolume {
  double value = 0.0;
  double std_error = 0.0;
  long samples = 0;
};

/// Monte-Carlo evaluation of the volume as the integral of the linking
/// number over a bounding box. Fixed seed -> reproducible.
MonteCarloVolume monte_carlo_volume(const Polyhedron& p, long samples,
                                    std::uint64_t seed = kDefaultSeed);

/// Dehn invariant: raw (length, angle) terms over the codimension-2 faces,
/// plus the reduced per-radicand angle combinations when exact lengths are
/// available. A term q*sqrt(d) (x) phi contributes q*phi to alpha_d.
struct DehnInvariant {
  struct Term {
    Codim2Face face;
    double length = 0.0;
    double angle = 0.0;  // representative in (-pi, pi]
    std::optional<QuadExt> exact_length;
  };
  std::vector<Term> raw;
  std::optional<std::map<long, double>> reduced;  // radicand -> alpha_d branch

  /// Heuristic reduction for numeric-only lengths: groups edges whose length
  /// ratios look rational with denominator <= 64 at 1e-9. Unsound in
  /// general; reported separately and clearly labelled.
  struct HeuristicGroup {
    double unit_length = 0.0;
    std::vector<size_t> members;
    double alpha = 0.0;
  };
  std::optional<std::vector<HeuristicGroup>> heuristic;

  double tensor_sum() const;  // sum of length * angle over raw terms
};

/// Throws std::invalid_argument when exact and measured lengths disagree
/// beyond 1e-9.
DehnInvariant dehn(const Polyhedron& p, const EdgeLengths* exact = nullptr);

/// Flexion path: polyhedra of a fixed combinatorial type over an open
/// parameter interval. Edge-length constancy is checked on demand.
struct FlexionPath {
  double t_min = 0.0;
  double t_max = 0.0;
  std::function<Polyhedron(double)> at;
};

/// Max deviation of any edge length from its value at the first sample.
double flexion_length_deviation(const FlexionPath& path, int samples);

struct SchlafliResult {
  double lhs = 0.0;           // sum V_sigma * dphi_sigma/dt (central difference)
  double scale = 0.0;         // sum V_sigma, for relative thresholds
  std::optional<double> implied_dvolume;  // curved only: lhs / (eps (n-1))
};

/// Throws std::runtime_error when the angle branches jump more than pi/2
/// across the three-point stencil.
SchlafliResult schlafli_residual(const FlexionPath& path, double t, double h);

/// Dehn-coefficient constancy analysis along a flexion.
struct SweepReport {
  std::vector<Codim2Face> faces;  // column order of `phi`
  std::vector<std::string> face_names;
  Eigen::VectorXd t;
  Eigen::VectorXd volume;
  Eigen::VectorXd schlafli;       // residual at each interior-capable sample
  Eigen::MatrixXd phi;            // samples x faces, continuous branches
  std::vector<long> radicands;
  Eigen::MatrixXd alpha;          // samples x radicands
  std::map<long, double> max_deviation;
  double deviation_tolerance = 1e-8;

  bool constant() const {
    for (const auto& [d, dev] : max_deviation)
      if (dev > deviation_tolerance) return false;
    return true;
  }
};

/// Pre-checks edge-length constancy against the exact lengths (1e-9), then
/// tracks all dihedral-angle branches and the reduced Dehn coefficients over
/// `samples` uniformly spaced parameters. Sample evaluation parallelizes over
/// `jobs` threads; output is deterministic regardless.
SweepReport dehn_sweep(const FlexionPath& path, int samples, const EdgeLengths& exact,
                       int jobs = 1, double schlafli_h = 1e-4);

}  // namespace flexlab
