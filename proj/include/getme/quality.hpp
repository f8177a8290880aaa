#pragma once

#include "getme/mesh.hpp"

#include <optional>
#include <string>
#include <vector>

namespace getme {

/// Reference tetrahedron for the mean ratio: its difference matrix W and
/// determinant w. Defaults to the unit-edge regular tetrahedron (w = 1/sqrt 2).
class ReferenceFrame {
 public:
  ReferenceFrame();
  explicit ReferenceFrame(const Coords& tetra);

  const Eigen::Matrix3d& matrix() const { return W_; }
  const Eigen::Matrix3d& inverse() const { return Winv_; }
  double determinant() const { return det_; }

 private:
  Eigen::Matrix3d W_;
  Eigen::Matrix3d Winv_;
  double det_;
};

/// Tetrahedral difference matrix D = (x2-x1, x3-x1, x4-x1).
Eigen::Matrix3d differenceMatrix(const Coords& x);

/// 3 det(S)^{2/3} / |S|_F^2 with S = D W^{-1}; 0 when det(D) <= 0.
double meanRatio(const Coords& x, const ReferenceFrame& W = ReferenceFrame());

/// Gradient of meanRatio with respect to the four vertices (zero where the
/// value is clamped to 0).
Coords meanRatioGradient(const Coords& x, const ReferenceFrame& W = ReferenceFrame());

/// Both sides of C q^{3/2} = vol(x / |S|_F): lhs = q^{3/2}, rhs = vol(x/|S|_F).
struct VolumeEquivalence {
  double lhs;
  double rhs;
};
VolumeEquivalence meanRatioVolumeEquivalence(const Coords& x,
                                             const ReferenceFrame& W = ReferenceFrame());

enum class Measure {
  MeanVolumeSum,
  ProductSquared,     // q1 = prod vol^2
  InverseSquaredSum,  // q2 = -sum vol^-2
  MeanRatio,
  IsoperimetricQuotient,
};

enum class Combiner { ArithmeticMean, Sum, Min };

/*
 * Which element measure and which combiner make up the global quality.
 * ProductSquared always multiplies its element values (the combiner is not
 * consulted). volumeShift is added to every mean volume for q1/q2.
 */
struct QualityMeasureSpec {
  Measure measure = Measure::MeanVolumeSum;
  Combiner combiner = Combiner::ArithmeticMean;
  std::optional<double> volumeShift;
};

std::string_view toString(Measure m);
std::string_view toString(Combiner c);
Measure parseMeasure(std::string_view name);
Combiner parseCombiner(std::string_view name);

struct QualityReport {
  QualityMeasureSpec spec;
  std::vector<double> perElement;
  double global = 0;
  double min = 0;
  double max = 0;
  double mean = 0;
  int invalidCount = 0;  // elements with mean volume <= 0 (unshifted)
};

QualityReport meshQuality(const Mesh& mesh, const Coords& coords, const QualityMeasureSpec& spec);

/// Global quality only. For ProductSquared the log of the product is also
/// available through logProductSquared, which does not underflow.
double globalQuality(const Mesh& mesh, const Coords& coords, const QualityMeasureSpec& spec);
double logProductSquared(const Mesh& mesh, const Coords& coords, double shift = 0.0);

/// Exact gradient of globalQuality with respect to all vertex coordinates.
VertexField qualityGradientField(const Mesh& mesh, const Coords& coords,
                                 const QualityMeasureSpec& spec);

/// 0 if every mean volume is positive, otherwise twice the magnitude of the
/// most negative one (or a tiny positive value if the minimum is exactly 0).
double computeVolumeShift(const Mesh& mesh, const Coords& coords);

}  // namespace getme
