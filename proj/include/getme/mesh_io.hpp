#pragma once

// Legacy ASCII unstructured-grid files (VTK "# vtk DataFile Version" format)
// with tetra (10), hexahedron (12), wedge (13) and pyramid (14) cells.
//
// File orderings match the canonical element orderings except for the
// wedge, whose base triangle is wound with its normal pointing out of the
// cell: file (0,1,2,3,4,5) <-> canonical prism (0,2,1,3,5,4). The
// permutation is an involution.

#include "getme/mesh.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace getme {

struct MeshAttributes {
  bool boundaryFlag = true;
  std::vector<std::pair<std::string, std::vector<double>>> pointScalars;
  std::vector<std::pair<std::string, std::vector<double>>> cellScalars;
};

Mesh readMesh(std::istream& in);
Mesh readMesh(const std::filesystem::path& path);

void writeMesh(const Mesh& mesh, const Coords& coords, std::ostream& out,
               const MeshAttributes& attributes = {});
void writeMesh(const Mesh& mesh, const Coords& coords, const std::filesystem::path& path,
               const MeshAttributes& attributes = {});

int vtkCellType(ElementKind kind);

}  // namespace getme
