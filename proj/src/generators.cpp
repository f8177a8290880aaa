#include "getme/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace getme {

namespace {

Coords columns(std::initializer_list<Point3> points) {
  Coords x(3, static_cast<Index>(points.size()));
  Index i = 0;
  for (const Point3& p : points) x.col(i++) = p;
  return x;
}

Mesh singleElement(ElementKind kind, Coords x) {
  Element e{kind, {}};
  for (Index i = 0; i < x.cols(); ++i) e.vertices.push_back(i);
  return makeMesh(std::move(x), {e});
}

Mesh unitElement(ElementKind kind) {
  switch (kind) {
    case ElementKind::Tetra:
      return singleElement(kind, columns({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    case ElementKind::Pyramid:
      return singleElement(
          kind, columns({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0.5, 0.5, 1}}));
    case ElementKind::Prism:
      return singleElement(
          kind, columns({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}}));
    case ElementKind::Hexa:
      return singleElement(kind, columns({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                          {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}));
  }
  throw Error(ErrorCode::InvalidSpec, "unknown element kind");
}

// Shapes whose mean-volume field is radial after centering, i.e. fixed
// points of the normalized flow. The pyramid and prism heights solve that
// condition for a unit base edge; they are not the Johnson solids.
Mesh regularElement(ElementKind kind) {
  const double s3 = std::sqrt(3.0);
  switch (kind) {
    case ElementKind::Tetra:
      return singleElement(kind, regularTetraCoords());
    case ElementKind::Pyramid: {
      const double h = std::sqrt(5.0) / 2.0;
      return singleElement(kind, columns({{-0.5, -0.5, 0}, {0.5, -0.5, 0}, {0.5, 0.5, 0},
                                          {-0.5, 0.5, 0}, {0, 0, h}}));
    }
    case ElementKind::Prism: {
      const double h = std::sqrt(2.0 / 3.0);
      return singleElement(kind, columns({{0, 0, 0}, {1, 0, 0}, {0.5, s3 / 2, 0}, {0, 0, h},
                                          {1, 0, h}, {0.5, s3 / 2, h}}));
    }
    case ElementKind::Hexa:
      return unitElement(kind);
  }
  throw Error(ErrorCode::InvalidSpec, "unknown element kind");
}

Mesh innerVertexTetra(const std::optional<Point3>& inner) {
  Coords x(3, 5);
  x.leftCols(4) = regularTetraCoords();
  x.col(4) = inner.value_or(x.leftCols(4).rowwise().mean());
  // Each sub-tetrahedron replaces one outer vertex by the inner one, which
  // keeps the orientation of (1,2,3,4) whenever the inner vertex is inside.
  std::vector<Element> elements = {{ElementKind::Tetra, {0, 1, 2, 4}},
                                   {ElementKind::Tetra, {0, 1, 4, 3}},
                                   {ElementKind::Tetra, {0, 4, 2, 3}},
                                   {ElementKind::Tetra, {4, 1, 2, 3}}};
  return makeMesh(std::move(x), std::move(elements));
}

Index latticeIndex(int i, int j, int k, int n) { return (static_cast<Index>(k) * n + j) * n + i; }

Coords latticeCoords(int k) {
  const int n = k + 1;
  Coords x(3, static_cast<Index>(n) * n * n);
  for (int c = 0; c < n; ++c)
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) x.col(latticeIndex(a, b, c, n)) = Point3(a, b, c);
  return x;
}

Mesh hexGrid(int k) {
  const int n = k + 1;
  std::vector<Element> elements;
  for (int c = 0; c < k; ++c)
    for (int b = 0; b < k; ++b)
      for (int a = 0; a < k; ++a) {
        auto v = [&](int i, int j, int l) { return latticeIndex(a + i, b + j, c + l, n); };
        elements.push_back({ElementKind::Hexa,
                            {v(0, 0, 0), v(1, 0, 0), v(1, 1, 0), v(0, 1, 0), v(0, 0, 1),
                             v(1, 0, 1), v(1, 1, 1), v(0, 1, 1)}});
      }
  return makeMesh(latticeCoords(k), std::move(elements));
}

// Kuhn subdivision: one tet per monotone lattice path from (0,0,0) to
// (1,1,1) in each cube; conforming across neighbouring cubes.
Mesh tetGrid(int k) {
  const int n = k + 1;
  Coords x = latticeCoords(k);
  std::vector<Element> elements;
  std::array<int, 3> axes = {0, 1, 2};
  for (int c = 0; c < k; ++c)
    for (int b = 0; b < k; ++b)
      for (int a = 0; a < k; ++a) {
        std::sort(axes.begin(), axes.end());
        do {
          std::array<int, 3> p = {a, b, c};
          Element e{ElementKind::Tetra, {latticeIndex(p[0], p[1], p[2], n)}};
          for (int axis : axes) {
            ++p[axis];
            e.vertices.push_back(latticeIndex(p[0], p[1], p[2], n));
          }
          orientPositively(e, x);
          elements.push_back(std::move(e));
        } while (std::next_permutation(axes.begin(), axes.end()));
      }
  return makeMesh(std::move(x), std::move(elements));
}

Coords icosahedronVertices() {
  const double phi = std::numbers::phi;
  Coords x(3, 12);
  Index i = 0;
  for (double s : {-1.0, 1.0})
    for (double t : {-1.0, 1.0}) {
      x.col(i++) = Point3(0, s, t * phi);
      x.col(i++) = Point3(s, t * phi, 0);
      x.col(i++) = Point3(t * phi, 0, s);
    }
  return x / 2.0;  // edge length 2 -> 1
}

std::vector<Triangle> icosahedronTriangles(const Coords& x) {
  std::vector<Triangle> tris;
  auto isEdge = [&](Index a, Index b) { return std::abs((x.col(a) - x.col(b)).norm() - 1.0) < 1e-9; };
  for (Index a = 0; a < 12; ++a)
    for (Index b = a + 1; b < 12; ++b)
      for (Index c = b + 1; c < 12; ++c) {
        if (!isEdge(a, b) || !isEdge(b, c) || !isEdge(a, c)) continue;
        const Point3 n = (x.col(b) - x.col(a)).cross(x.col(c) - x.col(a));
        if (n.dot(x.col(a) + x.col(b) + x.col(c)) > 0) {
          tris.push_back({a, b, c});
        } else {
          tris.push_back({a, c, b});
        }
      }
  return tris;
}

Mesh icosahedronMesh() {
  const SurfacePolyhedron surface = icosahedronSurface();
  Coords x(3, 13);
  x.leftCols(12) = surface.vertices;
  x.col(12).setZero();
  std::vector<Element> elements;
  for (const auto& [a, b, c] : surface.triangles) {
    Element e{ElementKind::Tetra, {a, b, c, 12}};
    orientPositively(e, x);
    elements.push_back(std::move(e));
  }
  return makeMesh(std::move(x), std::move(elements));
}

// A pyramid-decomposed cube, a hexahedron, a cube split into two prisms and
// a tetrahedron capping one prism triangle, all conforming.
Mesh mixedMesh() {
  std::vector<Point3> points;
  std::map<std::array<long, 3>, Index> lookup;
  auto vertex = [&](double px, double py, double pz) {
    const std::array<long, 3> key = {std::lround(px * 1000), std::lround(py * 1000),
                                     std::lround(pz * 1000)};
    auto [it, inserted] = lookup.emplace(key, static_cast<Index>(points.size()));
    if (inserted) points.emplace_back(px, py, pz);
    return it->second;
  };

  std::vector<Element> elements;
  const Index center = vertex(0.5, 0.5, 0.5);
  const std::array<std::array<Point3, 4>, 6> cubeFaces = {{
      {{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}},
      {{{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}},
      {{{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}}},
      {{{0, 1, 0}, {1, 1, 0}, {1, 1, 1}, {0, 1, 1}}},
      {{{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {0, 0, 1}}},
      {{{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}}},
  }};
  for (const auto& face : cubeFaces) {
    Element e{ElementKind::Pyramid, {}};
    for (const Point3& p : face) e.vertices.push_back(vertex(p.x(), p.y(), p.z()));
    e.vertices.push_back(center);
    elements.push_back(std::move(e));
  }

  elements.push_back({ElementKind::Hexa,
                      {vertex(1, 0, 0), vertex(2, 0, 0), vertex(2, 1, 0), vertex(1, 1, 0),
                       vertex(1, 0, 1), vertex(2, 0, 1), vertex(2, 1, 1), vertex(1, 1, 1)}});

  // Triangles in the xz-plane, extruded along y.
  elements.push_back({ElementKind::Prism,
                      {vertex(2, 0, 0), vertex(3, 0, 0), vertex(3, 0, 1), vertex(2, 1, 0),
                       vertex(3, 1, 0), vertex(3, 1, 1)}});
  elements.push_back({ElementKind::Prism,
                      {vertex(2, 0, 0), vertex(3, 0, 1), vertex(2, 0, 1), vertex(2, 1, 0),
                       vertex(3, 1, 1), vertex(2, 1, 1)}});

  elements.push_back({ElementKind::Tetra,
                      {vertex(2, 1, 0), vertex(3, 1, 0), vertex(3, 1, 1), vertex(2.7, 1.7, 0.3)}});

  Coords x(3, static_cast<Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) x.col(static_cast<Index>(i)) = points[i];
  for (Element& e : elements) orientPositively(e, x);
  return makeMesh(std::move(x), std::move(elements));
}

}  // namespace

Coords regularTetraCoords() {
  const double s3 = std::sqrt(3.0);
  return columns({{0, 0, 0}, {1, 0, 0}, {0.5, s3 / 2, 0}, {0.5, s3 / 6, std::sqrt(6.0) / 3}});
}

void orientPositively(Element& element, const Coords& coords) {
  if (elementMeanVolume(element.kind, elementCoords(coords, element)) >= 0) return;
  auto& v = element.vertices;
  switch (element.kind) {
    case ElementKind::Tetra:
      std::swap(v[2], v[3]);
      break;
    case ElementKind::Pyramid:
      std::swap(v[1], v[3]);
      break;
    case ElementKind::Prism:
      std::swap_ranges(v.begin(), v.begin() + 3, v.begin() + 3);
      break;
    case ElementKind::Hexa:
      std::swap_ranges(v.begin(), v.begin() + 4, v.begin() + 4);
      break;
  }
}

SurfacePolyhedron icosahedronSurface() {
  SurfacePolyhedron s;
  s.vertices = icosahedronVertices();
  s.triangles = icosahedronTriangles(s.vertices);
  return s;
}

Mesh perturbMesh(const Mesh& mesh, double amplitude, std::uint64_t seed, bool moveBoundary) {
  if (!(amplitude >= 0.0)) throw Error(ErrorCode::InvalidSpec, "perturbation must be >= 0");
  Mesh out = mesh;
  if (amplitude == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  for (Index i = 0; i < out.vertexCount(); ++i) {
    Point3 dir(normal(rng), normal(rng), normal(rng));
    const double radius = amplitude * std::cbrt(uniform(rng));
    if (!moveBoundary && out.boundary[i]) continue;
    const double len = dir.norm();
    if (len > 0) out.vertices.col(i) += (radius / len) * dir;
  }
  return out;
}

Mesh generateMesh(const GeneratorSpec& spec) {
  Mesh mesh;
  switch (spec.kind) {
    case GeneratorKind::UnitElement: mesh = unitElement(spec.element); break;
    case GeneratorKind::RegularElement: mesh = regularElement(spec.element); break;
    case GeneratorKind::InnerVertexTetra: mesh = innerVertexTetra(spec.innerVertex); break;
    case GeneratorKind::TetGrid:
    case GeneratorKind::HexGrid:
      if (spec.gridSize <= 0) throw Error(ErrorCode::InvalidSpec, "grid size must be positive");
      mesh = spec.kind == GeneratorKind::TetGrid ? tetGrid(spec.gridSize) : hexGrid(spec.gridSize);
      break;
    case GeneratorKind::Icosahedron: mesh = icosahedronMesh(); break;
    case GeneratorKind::Mixed: mesh = mixedMesh(); break;
  }
  return perturbMesh(mesh, spec.perturbation, spec.seed, spec.perturbBoundary);
}

std::vector<std::string> generatorNames() {
  return {"unit-tetra",    "unit-pyramid",    "unit-prism", "unit-hexa",
          "regular-tetra", "regular-pyramid", "regular-prism", "regular-hexa",
          "inner-vertex",  "tet-grid",        "hex-grid",   "icosahedron",
          "mixed"};
}

GeneratorSpec parseGeneratorName(std::string_view name) {
  static const std::map<std::string_view, ElementKind> kinds = {
      {"tetra", ElementKind::Tetra},
      {"pyramid", ElementKind::Pyramid},
      {"prism", ElementKind::Prism},
      {"hexa", ElementKind::Hexa}};
  GeneratorSpec spec;
  auto withPrefix = [&](std::string_view prefix, GeneratorKind kind) {
    if (!name.starts_with(prefix)) return false;
    auto it = kinds.find(name.substr(prefix.size()));
    if (it == kinds.end()) return false;
    spec.kind = kind;
    spec.element = it->second;
    return true;
  };
  if (withPrefix("unit-", GeneratorKind::UnitElement) ||
      withPrefix("regular-", GeneratorKind::RegularElement)) {
    return spec;
  }
  if (name == "inner-vertex") spec.kind = GeneratorKind::InnerVertexTetra;
  else if (name == "tet-grid") spec.kind = GeneratorKind::TetGrid;
  else if (name == "hex-grid") spec.kind = GeneratorKind::HexGrid;
  else if (name == "icosahedron") spec.kind = GeneratorKind::Icosahedron;
  else if (name == "mixed") spec.kind = GeneratorKind::Mixed;
  else throw Error(ErrorCode::InvalidSpec, "unknown generator '" + std::string(name) + "'");
  return spec;
}

}  // namespace getme
