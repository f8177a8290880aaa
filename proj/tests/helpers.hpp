#pragma once

#include "getme/common.hpp"
#include "getme/generators.hpp"

#include <Eigen/Geometry>

#include <random>

namespace getme::test {

inline Eigen::Matrix3d randomRotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

inline Coords jittered(const Coords& base, double amplitude, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  Coords x = base;
  for (Index k = 0; k < x.size(); ++k) x.data()[k] += u(rng);
  return x;
}

/// Random element of the given kind near the regular shape, positively oriented.
inline Coords randomElement(ElementKind kind, std::mt19937_64& rng, double amplitude = 0.15) {
  const Mesh m = generateMesh({GeneratorKind::RegularElement, kind});
  return jittered(m.vertices, amplitude, rng);
}

inline Coords randomTetra(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Coords x(3, 4);
    for (Index k = 0; k < x.size(); ++k) x.data()[k] = u(rng);
    const Eigen::Vector3d a = x.col(1) - x.col(0), b = x.col(2) - x.col(0), c = x.col(3) - x.col(0);
    const double v = a.cross(b).dot(c) / 6.0;
    if (std::abs(v) < 1e-2) continue;
    if (v < 0) x.col(2).swap(x.col(3));
    return x;
  }
}

constexpr ElementKind kAllKinds[] = {ElementKind::Tetra, ElementKind::Pyramid, ElementKind::Prism,
                                     ElementKind::Hexa};

}  // namespace getme::test
