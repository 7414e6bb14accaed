#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <utility>

#include "flexlab/pseudomanifold.hpp"
#include "flexlab/quadext.hpp"
#include "flexlab/spaceform.hpp"

namespace flexlab {

/// Vertex placement of a combinatorial complex in a space form. Rows of
/// `coords` follow the complex's dense vertex indexing.
struct Polyhedron {
  std::shared_ptr<const PseudoManifold> complex;
  SpaceForm space;
  Eigen::MatrixXd coords;

  Eigen::VectorXd vertex(int i) const { return coords.row(i); }
};

Polyhedron make_polyhedron(PseudoManifold complex, SpaceForm space, Eigen::MatrixXd coords);

using EdgeKey = std::pair<int, int>;  // sorted vertex indices

inline EdgeKey edge_key(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

/// Positive edge lengths, optionally paired with exact values.
struct EdgeLengths {
  std::map<EdgeKey, double> value;
  std::map<EdgeKey, QuadExt> exact;

  bool has_exact() const { return !exact.empty(); }
  double at(int u, int v) const;
  const QuadExt* exact_at(int u, int v) const;  // nullptr if absent
};

}  // namespace flexlab
