#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "flexlab/measures.hpp"
#include "flexlab/polyhedron.hpp"
#include "flexlab/suspension.hpp"

namespace flexlab {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// On-disk polyhedron: space form, vertex coordinates, oriented top
/// simplices, optional exact edge lengths as QuadExt literals. Structural
/// parsing only; semantic checks (valid complex, model membership,
/// exact/numeric consistency) are the validate command's job.
struct PolyhedronFile {
  Polyhedron poly;
  EdgeLengths lengths;  // exact entries from the file; values measured from coords
};

PolyhedronFile load_polyhedron(const std::filesystem::path& path);

void save_polyhedron(const std::filesystem::path& path, const Polyhedron& poly,
                     const EdgeLengths* exact = nullptr);

SuspensionSpec load_suspension_spec(const std::filesystem::path& path);

void write_sweep_csv(std::ostream& os, const SweepReport& rep);

/// 17-significant-digit decimal, '.' separator; the CSV number format.
std::string format_g17(double v);

}  // namespace flexlab
