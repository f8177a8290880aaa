#pragma once

#include "getme/geometry.hpp"
#include "getme/mesh.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace getme {

enum class GeneratorKind {
  UnitElement,     // unit tet / unit pyramid / unit right prism / unit cube
  RegularElement,  // fixed point of the mean-volume flow for each kind
  InnerVertexTetra,  // regular tetrahedron split at one inner vertex into 4 tets
  TetGrid,         // k^3 unit cubes, 6 tets each
  HexGrid,         // k^3 unit cubes
  Icosahedron,     // unit-edge regular icosahedron, 20 tets around its center
  Mixed,           // pyramids, a hexahedron, prisms and a tetrahedron
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::UnitElement;
  ElementKind element = ElementKind::Tetra;
  int gridSize = 1;
  std::optional<Point3> innerVertex;  // InnerVertexTetra; defaults to the centroid
  double perturbation = 0.0;          // max displacement per vertex
  bool perturbBoundary = false;
  std::uint64_t seed = 0;
};

Mesh generateMesh(const GeneratorSpec& spec);

/// Moves every eligible vertex by a random vector of length <= amplitude.
Mesh perturbMesh(const Mesh& mesh, double amplitude, std::uint64_t seed, bool moveBoundary);

/// Unit-edge regular tetrahedron (0,0,0),(1,0,0),(1/2,sqrt3/2,0),(1/2,sqrt3/6,sqrt6/3).
Coords regularTetraCoords();

/// Reorders the vertices of an element so that its mean volume is positive.
void orientPositively(Element& element, const Coords& coords);

/// Unit-edge regular icosahedron as an outward-oriented closed surface.
SurfacePolyhedron icosahedronSurface();

/// Names accepted by parseGeneratorName, e.g. "regular-hexa", "tet-grid".
std::vector<std::string> generatorNames();
GeneratorSpec parseGeneratorName(std::string_view name);

}  // namespace getme
