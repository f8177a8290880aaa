#pragma once

// Generalized face normals, (mean) volumes, mean boundary areas, the
// isoperimetric quotient and the per-element transformation fields X_e.
// Everything here is a pure function templated on the scalar type.

#include "getme/common.hpp"
#include "getme/mesh.hpp"

#include <array>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <span>

namespace getme {

/// nu(x_1..x_k) = sum of cyclic cross products x_i x x_{i+1}. For a planar
/// curve this is twice the enclosed vector area (right-hand rule).
template <typename Derived>
Vec3<typename Derived::Scalar> polygonNormal(const Eigen::MatrixBase<Derived>& pts) {
  static_assert(Derived::RowsAtCompileTime == 3 || Derived::RowsAtCompileTime == Eigen::Dynamic);
  const Index k = pts.cols();
  if (k < 3) throw Error(ErrorCode::InvalidPolygon, "polygon needs at least 3 points");
  Vec3<typename Derived::Scalar> n = Vec3<typename Derived::Scalar>::Zero();
  for (Index i = 0; i < k; ++i) {
    n += pts.col(i).template head<3>().cross(pts.col((i + 1) % k).template head<3>());
  }
  return n;
}

namespace detail {

// nu over element vertices addressed by 1-based labels, so that the tables
// below read exactly like the element formulas.
template <typename Derived>
Vec3<typename Derived::Scalar> nu(const Eigen::MatrixBase<Derived>& x,
                                  std::initializer_list<int> labels) {
  using Scalar = typename Derived::Scalar;
  Vec3<Scalar> n = Vec3<Scalar>::Zero();
  const int* first = labels.begin();
  const std::size_t k = labels.size();
  for (std::size_t i = 0; i < k; ++i) {
    const int a = first[i] - 1;
    const int b = first[(i + 1) % k] - 1;
    n += x.col(a).template head<3>().cross(x.col(b).template head<3>());
  }
  return n;
}

template <typename Derived>
void checkVertexCount(ElementKind kind, const Eigen::MatrixBase<Derived>& x) {
  if (x.cols() != vertexCount(kind)) {
    throw Error(ErrorCode::InvalidElement, "coordinate count does not match element kind");
  }
}

template <typename Derived>
typename Derived::Scalar boundingBoxDiagonal(const Eigen::MatrixBase<Derived>& x) {
  return (x.rowwise().maxCoeff() - x.rowwise().minCoeff()).norm();
}

// A triangle of a boundary face together with its weight in the mean area.
struct WeightedTriangle {
  std::array<int, 3> local;
  double weight;
};

// Triangles with weights whose weighted normal lengths sum to the mean
// boundary area: 1/2 per triangle face, 1/4 per triangle of both diagonal
// triangulations of a quadrilateral face.
inline std::span<const WeightedTriangle> meanAreaTriangles(ElementKind kind) {
  auto build = [](ElementKind k) {
    std::vector<WeightedTriangle> tris;
    for (const LocalFace& f : localFaces(k)) {
      if (f.size() == 3) {
        tris.push_back({{f[0], f[1], f[2]}, 0.5});
      } else {
        tris.push_back({{f[0], f[1], f[2]}, 0.25});
        tris.push_back({{f[0], f[2], f[3]}, 0.25});
        tris.push_back({{f[0], f[1], f[3]}, 0.25});
        tris.push_back({{f[1], f[2], f[3]}, 0.25});
      }
    }
    return tris;
  };
  static const std::array<std::vector<WeightedTriangle>, 4> tables = {
      build(ElementKind::Tetra), build(ElementKind::Pyramid), build(ElementKind::Prism),
      build(ElementKind::Hexa)};
  return tables[static_cast<int>(kind)];
}

template <typename Scalar>
Scalar isoperimetricQuotient(Scalar volume, Scalar area) {
  using std::pow;
  using std::sqrt;
  return Scalar(6) * sqrt(Scalar(std::numbers::pi)) * volume / pow(area, Scalar(1.5));
}

// Quotient rule for iq = 6 sqrt(pi) V A^{-3/2}.
template <typename Scalar>
Coords3X<Scalar> isoperimetricGradient(Scalar volume, const Coords3X<Scalar>& volumeGrad,
                                       Scalar area, const Coords3X<Scalar>& areaGrad) {
  using std::pow;
  using std::sqrt;
  const Scalar c = Scalar(6) * sqrt(Scalar(std::numbers::pi));
  return c * (pow(area, Scalar(-1.5)) * volumeGrad -
              Scalar(1.5) * volume * pow(area, Scalar(-2.5)) * areaGrad);
}

}  // namespace detail

/// Signed tetrahedron volume (1/6)((x2-x1) x (x3-x1)) . (x4-x1).
template <typename Derived>
typename Derived::Scalar tetSignedVolume(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Vec3<Scalar> a = x.col(1) - x.col(0);
  const Vec3<Scalar> b = x.col(2) - x.col(0);
  const Vec3<Scalar> c = x.col(3) - x.col(0);
  return a.cross(b).dot(c) / Scalar(6);
}

/*
 * Element transformation field X_e = 6 grad(mean volume), one column per
 * element vertex. Tetra rows are the opposite face normals; the other kinds
 * average a triangle normal with the normal of the vertex's link polygon.
 * Homogeneous of degree 2 and translation invariant.
 */
template <typename Derived>
Coords3X<typename Derived::Scalar> elementFieldX(ElementKind kind,
                                                 const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  using detail::nu;
  detail::checkVertexCount(kind, x);
  Coords3X<Scalar> X(3, vertexCount(kind));
  const Scalar half(0.5);
  switch (kind) {
    case ElementKind::Tetra:
      X.col(0) = nu(x, {4, 3, 2});
      X.col(1) = nu(x, {4, 1, 3});
      X.col(2) = nu(x, {4, 2, 1});
      X.col(3) = nu(x, {1, 2, 3});
      break;
    case ElementKind::Pyramid:
      X.col(0) = half * (nu(x, {5, 4, 2}) + nu(x, {5, 4, 3, 2}));
      X.col(1) = half * (nu(x, {5, 1, 3}) + nu(x, {5, 1, 4, 3}));
      X.col(2) = half * (nu(x, {5, 2, 4}) + nu(x, {5, 2, 1, 4}));
      X.col(3) = half * (nu(x, {5, 3, 1}) + nu(x, {5, 3, 2, 1}));
      X.col(4) = nu(x, {1, 2, 3, 4});
      break;
    case ElementKind::Prism:
      X.col(0) = half * (nu(x, {3, 2, 4}) + nu(x, {2, 5, 4, 6, 3}));
      X.col(1) = half * (nu(x, {1, 3, 5}) + nu(x, {3, 6, 5, 4, 1}));
      X.col(2) = half * (nu(x, {2, 1, 6}) + nu(x, {1, 4, 6, 5, 2}));
      X.col(3) = half * (nu(x, {5, 6, 1}) + nu(x, {6, 3, 1, 2, 5}));
      X.col(4) = half * (nu(x, {6, 4, 2}) + nu(x, {4, 1, 2, 3, 6}));
      X.col(5) = half * (nu(x, {4, 5, 3}) + nu(x, {5, 2, 3, 1, 4}));
      break;
    case ElementKind::Hexa:
      X.col(0) = half * (nu(x, {2, 5, 4}) + nu(x, {6, 5, 8, 4, 3, 2}));
      X.col(1) = half * (nu(x, {3, 6, 1}) + nu(x, {7, 6, 5, 1, 4, 3}));
      X.col(2) = half * (nu(x, {4, 7, 2}) + nu(x, {8, 7, 6, 2, 1, 4}));
      X.col(3) = half * (nu(x, {1, 8, 3}) + nu(x, {5, 8, 7, 3, 2, 1}));
      X.col(4) = half * (nu(x, {1, 6, 8}) + nu(x, {6, 7, 8, 4, 1, 2}));
      X.col(5) = half * (nu(x, {2, 7, 5}) + nu(x, {7, 8, 5, 1, 2, 3}));
      X.col(6) = half * (nu(x, {3, 8, 6}) + nu(x, {8, 5, 6, 2, 3, 4}));
      X.col(7) = half * (nu(x, {4, 5, 7}) + nu(x, {5, 6, 7, 3, 4, 1}));
      break;
  }
  return X;
}

/*
 * Mean volume: the signed volume averaged over the element's tetrahedral
 * triangulations. Pyramids average their two triangulations explicitly.
 * Prisms and hexahedra use Euler's identity for the degree-3 potential of
 * X_e, vol = <x, X_e(x)> / 18, which needs no triangulation enumeration.
 */
template <typename Derived>
typename Derived::Scalar elementMeanVolume(ElementKind kind, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::checkVertexCount(kind, x);
  auto tet = [&](int a, int b, int c, int d) {
    Coords3X<Scalar> t(3, 4);
    t << x.col(a - 1), x.col(b - 1), x.col(c - 1), x.col(d - 1);
    return tetSignedVolume(t);
  };
  switch (kind) {
    case ElementKind::Tetra:
      return tetSignedVolume(x);
    case ElementKind::Pyramid:
      return Scalar(0.5) * ((tet(1, 2, 3, 5) + tet(1, 3, 4, 5)) + (tet(1, 2, 4, 5) + tet(2, 3, 4, 5)));
    case ElementKind::Prism:
    case ElementKind::Hexa:
      break;
  }
  // Centering first keeps the identity well conditioned far from the origin.
  const Coords3X<Scalar> centered = x.colwise() - x.rowwise().mean();
  return centered.cwiseProduct(elementFieldX(kind, centered)).sum() / Scalar(18);
}

/// Mean surface area of the element boundary; quadrilateral faces average
/// their two diagonal triangulations.
template <typename Derived>
typename Derived::Scalar elementMeanBoundaryArea(ElementKind kind,
                                                 const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::checkVertexCount(kind, x);
  Scalar area(0);
  for (const auto& t : detail::meanAreaTriangles(kind)) {
    area += Scalar(t.weight) * detail::nu(x, {t.local[0] + 1, t.local[1] + 1, t.local[2] + 1}).norm();
  }
  return area;
}

template <typename Derived>
Coords3X<typename Derived::Scalar> elementMeanBoundaryAreaGradient(
    ElementKind kind, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::checkVertexCount(kind, x);
  const Scalar diag = detail::boundingBoxDiagonal(x);
  Coords3X<Scalar> g = Coords3X<Scalar>::Zero(3, x.cols());
  for (const auto& t : detail::meanAreaTriangles(kind)) {
    const auto [a, b, c] = t.local;
    const Vec3<Scalar> n = detail::nu(x, {a + 1, b + 1, c + 1});
    const Scalar len = n.norm();
    if (!(len > Scalar(1e-14) * diag * diag)) {
      throw Error(ErrorCode::DegenerateElement, "degenerate boundary triangle");
    }
    const Vec3<Scalar> unit = n / len;
    const Scalar w(t.weight);
    g.col(a) += w * (x.col(b) - x.col(c)).template head<3>().cross(unit);
    g.col(b) += w * (x.col(c) - x.col(a)).template head<3>().cross(unit);
    g.col(c) += w * (x.col(a) - x.col(b)).template head<3>().cross(unit);
  }
  return g;
}

/// Signed root isoperimetric quotient 6 sqrt(pi) vol / area^{3/2}.
template <typename Derived>
typename Derived::Scalar elementIQ(ElementKind kind, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Scalar area = elementMeanBoundaryArea(kind, x);
  const Scalar diag = detail::boundingBoxDiagonal(x);
  if (!(area > Scalar(1e-14) * diag * diag)) {
    throw Error(ErrorCode::DegenerateElement, "zero boundary area");
  }
  return detail::isoperimetricQuotient(elementMeanVolume(kind, x), area);
}

template <typename Derived>
Coords3X<typename Derived::Scalar> elementIQGradient(ElementKind kind,
                                                     const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Scalar area = elementMeanBoundaryArea(kind, x);
  const Scalar diag = detail::boundingBoxDiagonal(x);
  if (!(area > Scalar(1e-14) * diag * diag)) {
    throw Error(ErrorCode::DegenerateElement, "zero boundary area");
  }
  const Coords3X<Scalar> volumeGrad = elementFieldX(kind, x) / Scalar(6);
  return detail::isoperimetricGradient(elementMeanVolume(kind, x), volumeGrad, area,
                                       elementMeanBoundaryAreaGradient(kind, x));
}

// Closed triangulated surfaces (e.g. the icosahedron). The enclosed volume
// is exact for any triangulation of the interior.

using Triangle = std::array<Index, 3>;

/// A closed, outward-oriented triangulated surface treated as one polyhedron.
struct SurfacePolyhedron {
  Coords vertices;
  std::vector<Triangle> triangles;
};

template <typename Derived>
typename Derived::Scalar surfaceVolume(const Eigen::MatrixBase<Derived>& x,
                                       std::span<const Triangle> triangles) {
  using Scalar = typename Derived::Scalar;
  const Vec3<Scalar> center = x.rowwise().mean();
  Scalar v(0);
  for (const auto& [a, b, c] : triangles) {
    const Vec3<Scalar> pa = x.col(a) - center;
    const Vec3<Scalar> pb = x.col(b) - center;
    const Vec3<Scalar> pc = x.col(c) - center;
    v += pa.dot(pb.cross(pc));
  }
  return v / Scalar(6);
}

template <typename Derived>
typename Derived::Scalar surfaceArea(const Eigen::MatrixBase<Derived>& x,
                                     std::span<const Triangle> triangles) {
  using Scalar = typename Derived::Scalar;
  Scalar area(0);
  for (const auto& [a, b, c] : triangles) {
    const Vec3<Scalar> pa = x.col(a), pb = x.col(b), pc = x.col(c);
    area += (pb - pa).cross(pc - pa).norm();
  }
  return area / Scalar(2);
}

template <typename Derived>
typename Derived::Scalar surfaceIQ(const Eigen::MatrixBase<Derived>& x,
                                   std::span<const Triangle> triangles) {
  using Scalar = typename Derived::Scalar;
  const Scalar area = surfaceArea(x, triangles);
  const Scalar diag = detail::boundingBoxDiagonal(x);
  if (!(area > Scalar(1e-14) * diag * diag)) {
    throw Error(ErrorCode::DegenerateElement, "zero surface area");
  }
  return detail::isoperimetricQuotient(surfaceVolume(x, triangles), area);
}

template <typename Derived>
Coords3X<typename Derived::Scalar> surfaceIQGradient(const Eigen::MatrixBase<Derived>& x,
                                                     std::span<const Triangle> triangles) {
  using Scalar = typename Derived::Scalar;
  const Scalar diag = detail::boundingBoxDiagonal(x);
  Coords3X<Scalar> volumeGrad = Coords3X<Scalar>::Zero(3, x.cols());
  Coords3X<Scalar> areaGrad = Coords3X<Scalar>::Zero(3, x.cols());
  Scalar area(0);
  for (const auto& [a, b, c] : triangles) {
    const Vec3<Scalar> pa = x.col(a), pb = x.col(b), pc = x.col(c);
    // d/dx_a of a.(b x c)/6 is (b x c)/6, cyclically; translation invariance
    // lets the cone apex sit at the origin.
    volumeGrad.col(a) += pb.cross(pc) / Scalar(6);
    volumeGrad.col(b) += pc.cross(pa) / Scalar(6);
    volumeGrad.col(c) += pa.cross(pb) / Scalar(6);
    const Vec3<Scalar> n = (pb - pa).cross(pc - pa);
    const Scalar len = n.norm();
    if (!(len > Scalar(1e-14) * diag * diag)) {
      throw Error(ErrorCode::DegenerateElement, "degenerate surface triangle");
    }
    const Vec3<Scalar> unit = n / len;
    areaGrad.col(a) += (pb - pc).cross(unit) / Scalar(2);
    areaGrad.col(b) += (pc - pa).cross(unit) / Scalar(2);
    areaGrad.col(c) += (pa - pb).cross(unit) / Scalar(2);
    area += len / Scalar(2);
  }
  return detail::isoperimetricGradient(surfaceVolume(x, triangles), volumeGrad, area, areaGrad);
}

}  // namespace getme
