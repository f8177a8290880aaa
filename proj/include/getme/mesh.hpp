#pragma once

#include "getme/common.hpp"

#include <array>
#include <span>
#include <vector>

namespace getme {

enum class ElementKind { Tetra, Pyramid, Prism, Hexa };

constexpr int vertexCount(ElementKind kind) {
  switch (kind) {
    case ElementKind::Tetra: return 4;
    case ElementKind::Pyramid: return 5;
    case ElementKind::Prism: return 6;
    case ElementKind::Hexa: return 8;
  }
  return 0;
}

std::string_view toString(ElementKind kind);

/*
 * A volume element with its vertices in canonical order. Positions below are
 * 1-based labels; the stored indices are 0-based mesh vertex indices.
 *
 *   Tetra   (1,2,3,4)    positive signed volume when 4 lies on the side of
 *                        the normal of (1,2,3)
 *   Pyramid base (1,2,3,4) with apex 5 on the side of the base normal
 *   Prism   bottom (1,2,3), top (4,5,6), vertical edges i <-> i+3
 *   Hexa    bottom (1,2,3,4), top (5,6,7,8), vertical edges i <-> i+4
 */
struct Element {
  ElementKind kind = ElementKind::Tetra;
  std::vector<Index> vertices;

  friend bool operator==(const Element&, const Element&) = default;
};

/// A boundary polygon of an element, given by element-local positions
/// (0-based) and oriented with its normal pointing out of the element.
using LocalFace = std::vector<int>;

/// Outward-oriented faces of a positively oriented element of the given kind.
std::span<const LocalFace> localFaces(ElementKind kind);

/*
 * Vertex coordinates, typed elements and the derived adjacency data
 * (valence and boundary flags). Build with makeMesh/buildAdjacency; the
 * derived fields are only consistent after that.
 */
struct Mesh {
  Coords vertices;
  std::vector<Element> elements;
  std::vector<bool> boundary;
  std::vector<int> valence;

  Index vertexCount() const { return vertices.cols(); }
  Index elementCount() const { return static_cast<Index>(elements.size()); }
  bool allTetra() const;
};

/// Validates elements and populates valence and boundary flags. A face is on
/// the boundary iff exactly one element owns it.
Mesh buildAdjacency(Mesh mesh);

Mesh makeMesh(Coords vertices, std::vector<Element> elements);

/// Gathers the element's vertex coordinates into a 3 x n_e block.
Coords elementCoords(const Coords& coords, const Element& element);

struct BoundaryFace {
  std::vector<Index> vertices;  // outward orientation
  Index element = 0;
};

/// Faces owned by exactly one element, in element order, outward-oriented.
std::vector<BoundaryFace> boundaryFaces(const Mesh& mesh);

/// Smallest mean volume over all elements (+inf for an empty mesh).
double minElementVolume(const Mesh& mesh, const Coords& coords);

}  // namespace getme
