#include "getme/mesh.hpp"

#include "getme/geometry.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace getme {

std::string_view toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidElement: return "InvalidElement";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidPolygon: return "InvalidPolygon";
    case ErrorCode::DegenerateElement: return "DegenerateElement";
    case ErrorCode::DegenerateMesh: return "DegenerateMesh";
    case ErrorCode::NonPositiveVolume: return "NonPositiveVolume";
    case ErrorCode::MixedMeshMeanRatio: return "MixedMeshMeanRatio";
    case ErrorCode::IsolatedVertex: return "IsolatedVertex";
    case ErrorCode::NonHomogeneous: return "NonHomogeneous";
    case ErrorCode::ZeroField: return "ZeroField";
    case ErrorCode::InvalidDegree: return "InvalidDegree";
    case ErrorCode::OracleDomainError: return "OracleDomainError";
    case ErrorCode::UnsupportedCellType: return "UnsupportedCellType";
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

std::string_view toString(ElementKind kind) {
  switch (kind) {
    case ElementKind::Tetra: return "tetra";
    case ElementKind::Pyramid: return "pyramid";
    case ElementKind::Prism: return "prism";
    case ElementKind::Hexa: return "hexa";
  }
  return "unknown";
}

std::span<const LocalFace> localFaces(ElementKind kind) {
  // Outward orientation for positively oriented elements. The (1,2,3) face
  // of a tetrahedron and the bottom faces of the other kinds have their
  // normals pointing into the element, hence the reversed entries.
  static const std::vector<LocalFace> tetra = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
  static const std::vector<LocalFace> pyramid = {
      {0, 3, 2, 1}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  static const std::vector<LocalFace> prism = {
      {0, 2, 1}, {3, 4, 5}, {0, 1, 4, 3}, {1, 2, 5, 4}, {2, 0, 3, 5}};
  static const std::vector<LocalFace> hexa = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                              {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  switch (kind) {
    case ElementKind::Tetra: return tetra;
    case ElementKind::Pyramid: return pyramid;
    case ElementKind::Prism: return prism;
    case ElementKind::Hexa: return hexa;
  }
  return {};
}

bool Mesh::allTetra() const {
  return std::all_of(elements.begin(), elements.end(),
                     [](const Element& e) { return e.kind == ElementKind::Tetra; });
}

namespace {

using FaceKey = std::vector<Index>;

FaceKey faceKey(const Element& e, const LocalFace& face) {
  FaceKey key;
  key.reserve(face.size());
  for (int local : face) key.push_back(e.vertices[local]);
  std::sort(key.begin(), key.end());
  return key;
}

std::map<FaceKey, int> faceCounts(const Mesh& mesh) {
  std::map<FaceKey, int> counts;
  for (const Element& e : mesh.elements) {
    for (const LocalFace& f : localFaces(e.kind)) ++counts[faceKey(e, f)];
  }
  return counts;
}

}  // namespace

Mesh buildAdjacency(Mesh mesh) {
  const Index n = mesh.vertexCount();
  if (!mesh.vertices.allFinite()) {
    throw Error(ErrorCode::InvalidSpec, "vertex coordinates must be finite");
  }
  for (std::size_t id = 0; id < mesh.elements.size(); ++id) {
    const Element& e = mesh.elements[id];
    if (static_cast<int>(e.vertices.size()) != vertexCount(e.kind)) {
      throw Error(ErrorCode::InvalidElement,
                  "element " + std::to_string(id) + " has the wrong vertex count");
    }
    for (std::size_t i = 0; i < e.vertices.size(); ++i) {
      if (e.vertices[i] < 0 || e.vertices[i] >= n) {
        throw Error(ErrorCode::InvalidElement,
                    "element " + std::to_string(id) + " references a missing vertex");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (e.vertices[i] == e.vertices[j]) {
          throw Error(ErrorCode::InvalidElement,
                      "element " + std::to_string(id) + " repeats a vertex");
        }
      }
    }
  }

  mesh.valence.assign(n, 0);
  for (const Element& e : mesh.elements) {
    for (Index v : e.vertices) ++mesh.valence[v];
  }
  mesh.boundary.assign(n, false);
  for (const auto& [key, count] : faceCounts(mesh)) {
    if (count == 1) {
      for (Index v : key) mesh.boundary[v] = true;
    }
  }
  return mesh;
}

Mesh makeMesh(Coords vertices, std::vector<Element> elements) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.elements = std::move(elements);
  return buildAdjacency(std::move(mesh));
}

Coords elementCoords(const Coords& coords, const Element& element) {
  Coords x(3, static_cast<Index>(element.vertices.size()));
  for (std::size_t i = 0; i < element.vertices.size(); ++i) {
    x.col(static_cast<Index>(i)) = coords.col(element.vertices[i]);
  }
  return x;
}

std::vector<BoundaryFace> boundaryFaces(const Mesh& mesh) {
  const auto counts = faceCounts(mesh);
  std::vector<BoundaryFace> faces;
  for (std::size_t id = 0; id < mesh.elements.size(); ++id) {
    const Element& e = mesh.elements[id];
    for (const LocalFace& f : localFaces(e.kind)) {
      if (counts.at(faceKey(e, f)) != 1) continue;
      BoundaryFace face;
      face.element = static_cast<Index>(id);
      for (int local : f) face.vertices.push_back(e.vertices[local]);
      faces.push_back(std::move(face));
    }
  }
  return faces;
}

double minElementVolume(const Mesh& mesh, const Coords& coords) {
  double lo = std::numeric_limits<double>::infinity();
  for (const Element& e : mesh.elements) {
    lo = std::min(lo, elementMeanVolume(e.kind, elementCoords(coords, e)));
  }
  return lo;
}

}  // namespace getme
