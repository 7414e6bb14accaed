#pragma once

#include <string>
#include <vector>

namespace flexlab {

using VertexId = std::string;

/// Oriented simplicial complex given by its top-dimensional simplices only
/// (every lower face is implied). Tuple order encodes orientation up to even
/// permutation. Construction never validates; run validate() to check the
/// pseudo-manifold conditions.
struct PseudoManifold {
  int dim_top = 0;                          // k; top simplices have k+1 vertices
  std::vector<VertexId> vertex_ids;         // dense index -> id
  std::vector<std::vector<int>> simplices;  // ordered vertex indices

  static PseudoManifold from_simplices(int dim_top,
                                       const std::vector<std::vector<VertexId>>& tuples);

  int vertex_count() const { return static_cast<int>(vertex_ids.size()); }
  int index_of(const VertexId& id) const;  // -1 if absent
};

enum class ViolationKind {
  structural,    // malformed tuple: wrong arity or repeated vertex
  face_count,    // a (k-1)-face not contained in exactly two top simplices
  connectivity,  // dual adjacency graph across (k-1)-faces disconnected
  orientation,   // a shared (k-1)-face with equal induced orientations
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate(const PseudoManifold& k);

/// A (k-1)-face (sorted vertex indices) with its two incident top simplices.
struct Codim2Face {
  std::vector<int> face;
  int tau1 = -1;
  int tau2 = -1;
};

/// All shared (k-1)-faces of a valid complex, each listed once, in a
/// deterministic order. Throws std::invalid_argument on invalid input.
std::vector<Codim2Face> codim2_faces(const PseudoManifold& k);

/// Sorted vertex-index pairs of all edges (1-faces).
std::vector<std::pair<int, int>> edges(const PseudoManifold& k);

/// Every distinct simplex of the complex (all nonempty subsets of top
/// simplices), as sorted index tuples.
std::vector<std::vector<int>> all_simplices(const PseudoManifold& k);

/// Parity of the permutation sorting `tuple` (+1 even, -1 odd); 0 if the
/// tuple has repeats.
int sort_parity(std::vector<int> tuple);

}  // namespace flexlab
