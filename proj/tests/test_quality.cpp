#include "helpers.hpp"

#include "getme/generators.hpp"
#include "getme/gradient_oracle.hpp"
#include "getme/quality.hpp"
#include "getme/smoothing.hpp"

#include <doctest.h>

#include <cmath>

using namespace getme;

namespace {

Mesh tetraMesh(Coords x) {
  return makeMesh(std::move(x), {{ElementKind::Tetra, {0, 1, 2, 3}}});
}

// Tetra with volume 1/2.
Coords halfVolumeTetra() {
  Coords x(3, 4);
  x << 0, 1, 0, 0,
       0, 0, 1, 0,
       0, 0, 0, 3;
  return x;
}

bool errorCode(const std::function<void()>& f, ErrorCode expected) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == expected;
  }
  return false;
}

}  // namespace

TEST_CASE("reference frame is the regular tetra") {
  const ReferenceFrame W;
  CHECK(W.determinant() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK((W.matrix() * W.inverse() - Eigen::Matrix3d::Identity()).norm() < 1e-14);
}

TEST_CASE("mean ratio values") {
  CHECK(meanRatio(regularTetraCoords()) == doctest::Approx(1.0).epsilon(1e-14));

  Coords flat = regularTetraCoords();
  flat(2, 3) = 0.0;
  CHECK(meanRatio(flat) == 0.0);

  Coords inverted = regularTetraCoords();
  inverted.col(2).swap(inverted.col(3));
  CHECK(meanRatio(inverted) == 0.0);
  CHECK(meanRatioGradient(inverted).norm() == 0.0);

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Coords x = test::randomTetra(rng);
    const double q = meanRatio(x);
    CHECK(q > 0.0);
    CHECK(q <= 1.0 + 1e-14);
    const Eigen::Matrix3d R = test::randomRotation(rng);
    const Coords moved = (1.7 * (R * x)).colwise() + Point3(1, 2, 3);
    CHECK(meanRatio(moved) == doctest::Approx(q).epsilon(1e-12));
  }
}

TEST_CASE("mean ratio gradient matches finite differences") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const Coords x = test::randomTetra(rng);
    const VertexField fd = fdGradient([](const Coords& y) { return meanRatio(y); }, x);
    CHECK(relativeError(meanRatioGradient(x), fd) < 1e-6);
  }
  CHECK(meanRatioGradient(regularTetraCoords()).norm() < 1e-14);
}

TEST_CASE("mean ratio and normalized volume are related by a constant") {
  std::mt19937_64 rng(23);
  const VolumeEquivalence ref = meanRatioVolumeEquivalence(regularTetraCoords());
  const double C = ref.rhs / ref.lhs;
  CHECK(C > 0);
  for (int trial = 0; trial < 20; ++trial) {
    const VolumeEquivalence v = meanRatioVolumeEquivalence(test::randomTetra(rng));
    CHECK(v.rhs == doctest::Approx(C * v.lhs).epsilon(1e-12));
  }
}

TEST_CASE("global quality of simple meshes") {
  const Mesh regular = tetraMesh(regularTetraCoords());
  const QualityReport mr =
      meshQuality(regular, regular.vertices, {Measure::MeanRatio, Combiner::Min, std::nullopt});
  CHECK(mr.global == doctest::Approx(1.0));
  CHECK(mr.invalidCount == 0);

  const Mesh half = tetraMesh(halfVolumeTetra());
  CHECK(globalQuality(half, half.vertices, {Measure::ProductSquared, Combiner::Sum, std::nullopt}) ==
        doctest::Approx(0.25));
  CHECK(globalQuality(half, half.vertices, {Measure::InverseSquaredSum, Combiner::Sum, std::nullopt}) ==
        doctest::Approx(-4.0));
  CHECK(logProductSquared(half, half.vertices) == doctest::Approx(std::log(0.25)));

  // The inner vertex does not change the total volume.
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 5; ++trial) {
    GeneratorSpec spec{GeneratorKind::InnerVertexTetra};
    spec.innerVertex = regularTetraCoords().rowwise().mean() + 0.05 * Point3::Random();
    const Mesh m = generateMesh(spec);
    CHECK(globalQuality(m, m.vertices, {Measure::MeanVolumeSum, Combiner::Sum, std::nullopt}) ==
          doctest::Approx(1.0 / (6.0 * std::sqrt(2.0))));
  }
}

TEST_CASE("quality report statistics") {
  const Mesh m = generateMesh({GeneratorKind::Mixed});
  const QualityReport r =
      meshQuality(m, m.vertices, {Measure::IsoperimetricQuotient, Combiner::ArithmeticMean, std::nullopt});
  REQUIRE(r.perElement.size() == m.elements.size());
  double sum = 0, lo = 1e300, hi = -1e300;
  for (double q : r.perElement) {
    sum += q;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  CHECK(r.mean == doctest::Approx(sum / r.perElement.size()));
  CHECK(r.global == doctest::Approx(r.mean));
  CHECK(r.min == lo);
  CHECK(r.max == hi);
}

TEST_CASE("quality error paths") {
  Coords inverted = halfVolumeTetra();
  inverted.col(2).swap(inverted.col(3));
  const Mesh bad = tetraMesh(inverted);
  CHECK(errorCode([&] { meshQuality(bad, bad.vertices, {Measure::ProductSquared, Combiner::Sum, std::nullopt}); },
                  ErrorCode::NonPositiveVolume));
  CHECK(errorCode([&] { meshQuality(bad, bad.vertices, {Measure::InverseSquaredSum, Combiner::Sum, std::nullopt}); },
                  ErrorCode::NonPositiveVolume));
  // With a shift the same mesh is measurable.
  CHECK(meshQuality(bad, bad.vertices, {Measure::InverseSquaredSum, Combiner::Sum, 1.0}).global ==
        doctest::Approx(-4.0));

  const Mesh mixed = generateMesh({GeneratorKind::Mixed});
  CHECK(errorCode([&] { meshQuality(mixed, mixed.vertices, {Measure::MeanRatio, Combiner::Min, std::nullopt}); },
                  ErrorCode::MixedMeshMeanRatio));

  // Mean ratio of an inverted element counts as invalid rather than failing.
  const QualityReport r = meshQuality(bad, bad.vertices, {Measure::MeanRatio, Combiner::Min, std::nullopt});
  CHECK(r.invalidCount == 1);
  CHECK(r.global == 0.0);

  CHECK_THROWS_AS(parseMeasure("volume"), Error);
  CHECK_THROWS_AS(parseCombiner("median"), Error);
  CHECK((parseMeasure("q2") == Measure::InverseSquaredSum));
  CHECK((toString(Combiner::ArithmeticMean) == "mean"));
}

TEST_CASE("mean-volume gradient field assembles X_e / 6") {
  const Mesh m = generateMesh({GeneratorKind::Mixed});
  const VertexField g =
      qualityGradientField(m, m.vertices, {Measure::MeanVolumeSum, Combiner::Sum, std::nullopt});
  CHECK((g - meanVolumeField(m, m.vertices) / 6.0).norm() < 1e-14);

  const Mesh half = tetraMesh(halfVolumeTetra());
  const VertexField g2 =
      qualityGradientField(half, half.vertices, {Measure::InverseSquaredSum, Combiner::Sum, std::nullopt});
  const Coords X = elementFieldX(ElementKind::Tetra, half.vertices);
  CHECK((g2 - X * (8.0 / 3.0)).norm() < 1e-13);  // (1/3) vol^-3 X
}

TEST_CASE("quality gradients match finite differences for every measure and combiner") {
  const Mesh mixed = generateMesh({GeneratorKind::Mixed});
  GeneratorSpec gridSpec{GeneratorKind::TetGrid};
  gridSpec.gridSize = 1;
  const Mesh tets = generateMesh(gridSpec);
  std::mt19937_64 rng(25);
  for (Measure measure : {Measure::MeanVolumeSum, Measure::ProductSquared, Measure::InverseSquaredSum,
                          Measure::MeanRatio, Measure::IsoperimetricQuotient}) {
    for (Combiner combiner : {Combiner::ArithmeticMean, Combiner::Sum, Combiner::Min}) {
      const Mesh& m = measure == Measure::MeanRatio ? tets : mixed;
      const QualityMeasureSpec spec{measure, combiner, std::nullopt};
      const Coords x = test::jittered(m.vertices, 0.1, rng);
      const VertexField fd = fdGradient([&](const Coords& y) { return globalQuality(m, y, spec); }, x);
      const std::string name = std::string(toString(measure)) + "/" + std::string(toString(combiner));
      CAPTURE(name);
      CHECK(relativeError(qualityGradientField(m, x, spec), fd) < 1e-6);
    }
  }
}

TEST_CASE("gradients are translation invariant and rotation equivariant") {
  const Mesh m = generateMesh({GeneratorKind::Mixed});
  std::mt19937_64 rng(26);
  const Eigen::Matrix3d R = test::randomRotation(rng);
  for (Measure measure : {Measure::MeanVolumeSum, Measure::ProductSquared, Measure::InverseSquaredSum,
                          Measure::IsoperimetricQuotient}) {
    const QualityMeasureSpec spec{measure, Combiner::Sum, std::nullopt};
    const VertexField g = qualityGradientField(m, m.vertices, spec);
    const Coords translated = m.vertices.colwise() + Point3(5, -3, 1);
    CHECK((qualityGradientField(m, translated, spec) - g).norm() < 1e-10 * g.norm());
    CHECK((qualityGradientField(m, Coords(R * m.vertices), spec) - R * g).norm() < 1e-10 * g.norm());
  }
}

TEST_CASE("q1 and q2 gradients are positive multiples of the smoothing directions") {
  std::mt19937_64 rng(27);
  const Mesh m = generateMesh({GeneratorKind::Mixed});
  for (Measure measure : {Measure::ProductSquared, Measure::InverseSquaredSum}) {
    const QualityMeasureSpec spec{measure, Combiner::Sum, std::nullopt};
    for (int trial = 0; trial < 5; ++trial) {
      const Coords x = test::jittered(m.vertices, 0.1, rng);
      const VertexField g = qualityGradientField(m, x, spec);
      const VertexField d = directionField(m, x, spec, Assembly::RawSum);
      const double c = g.cwiseProduct(d).sum() / d.squaredNorm();
      CHECK(c > 0);
      CHECK((g - c * d).norm() < 1e-12 * g.norm());
    }
  }
}

TEST_CASE("volume shift") {
  const Mesh ok = tetraMesh(halfVolumeTetra());
  CHECK(computeVolumeShift(ok, ok.vertices) == 0.0);

  // One inverted tet in an otherwise valid grid.
  GeneratorSpec spec{GeneratorKind::TetGrid};
  spec.gridSize = 2;
  Mesh m = generateMesh(spec);
  const Index center = 13;
  m.vertices.col(center) += Point3(0.1, 0.05, 1.2);
  const double vmin = minElementVolume(m, m.vertices);
  REQUIRE(vmin < 0);
  CHECK(computeVolumeShift(m, m.vertices) == doctest::Approx(-2.0 * vmin));
  CHECK(computeVolumeShift(m, Coords(2.0 * m.vertices)) == doctest::Approx(-16.0 * vmin));

  // A zero minimum still gets a small positive shift.
  Coords flat = halfVolumeTetra();
  flat(2, 3) = 0.0;
  const Mesh degenerate = tetraMesh(flat);
  const double s = computeVolumeShift(degenerate, degenerate.vertices);
  CHECK(s > 0);
  CHECK(s < 1e-10);
}
