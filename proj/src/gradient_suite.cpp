#include "getme/gradient_suite.hpp"

#include "getme/generators.hpp"
#include "getme/geometry.hpp"
#include "getme/quality.hpp"

#include <string>

namespace getme {

namespace {

Sampler jitter(Coords base, double amplitude) {
  return [base = std::move(base), amplitude](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    Coords x = base;
    for (Index k = 0; k < x.size(); ++k) x.data()[k] += u(rng);
    return x;
  };
}

}  // namespace

std::vector<FieldCheckReport> runGradientSuite(int samples, double tol, std::uint64_t seed) {
  std::vector<FieldCheckReport> reports;

  for (ElementKind kind : {ElementKind::Tetra, ElementKind::Pyramid, ElementKind::Prism,
                           ElementKind::Hexa}) {
    const Mesh regular = generateMesh({GeneratorKind::RegularElement, kind});
    const std::string name(toString(kind));
    reports.push_back(checkField(
        "mean-volume/" + name, [kind](const Coords& x) { return Coords(elementFieldX(kind, x) / 6.0); },
        [kind](const Coords& x) { return elementMeanVolume(kind, x); }, jitter(regular.vertices, 0.15),
        samples, tol, seed));
    reports.push_back(checkField(
        "iq/" + name, [kind](const Coords& x) { return elementIQGradient(kind, x); },
        [kind](const Coords& x) { return elementIQ(kind, x); }, jitter(regular.vertices, 0.15),
        samples, tol, seed + 1));
  }

  const Mesh mixed = generateMesh({GeneratorKind::Mixed});
  GeneratorSpec gridSpec{GeneratorKind::TetGrid};
  gridSpec.gridSize = 1;
  const Mesh tets = generateMesh(gridSpec);
  struct MeshCase {
    const Mesh* mesh;
    Measure measure;
    Combiner combiner;
  };
  const MeshCase cases[] = {
      {&mixed, Measure::MeanVolumeSum, Combiner::Sum},
      {&mixed, Measure::ProductSquared, Combiner::Sum},
      {&mixed, Measure::InverseSquaredSum, Combiner::Sum},
      {&mixed, Measure::IsoperimetricQuotient, Combiner::Sum},
      {&mixed, Measure::IsoperimetricQuotient, Combiner::ArithmeticMean},
      {&tets, Measure::MeanRatio, Combiner::Sum},
      {&tets, Measure::MeanRatio, Combiner::ArithmeticMean},
  };
  for (const MeshCase& c : cases) {
    const QualityMeasureSpec spec{c.measure, c.combiner, std::nullopt};
    const Mesh& mesh = *c.mesh;
    reports.push_back(checkField(
        "mesh/" + std::string(toString(c.measure)) + "/" + std::string(toString(c.combiner)),
        [&mesh, spec](const Coords& x) { return qualityGradientField(mesh, x, spec); },
        [&mesh, spec](const Coords& x) { return globalQuality(mesh, x, spec); },
        jitter(mesh.vertices, 0.1), samples, tol, seed + 2));
  }

  const SurfacePolyhedron ico = icosahedronSurface();
  const std::span<const Triangle> tris(ico.triangles);
  reports.push_back(checkField(
      "surface-iq/icosahedron", [tris](const Coords& x) { return surfaceIQGradient(x, tris); },
      [tris](const Coords& x) { return surfaceIQ(x, tris); }, jitter(ico.vertices, 0.1), samples,
      tol, seed + 3));
  return reports;
}

}  // namespace getme
