#include "getme/quality.hpp"

#include "getme/generators.hpp"
#include "getme/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace getme {

ReferenceFrame::ReferenceFrame() : ReferenceFrame(regularTetraCoords()) {}

ReferenceFrame::ReferenceFrame(const Coords& tetra)
    : W_(differenceMatrix(tetra)), Winv_(W_.inverse()), det_(W_.determinant()) {
  if (det_ == 0.0) throw Error(ErrorCode::InvalidSpec, "reference tetrahedron is degenerate");
}

Eigen::Matrix3d differenceMatrix(const Coords& x) {
  if (x.cols() != 4) throw Error(ErrorCode::InvalidElement, "mean ratio needs a tetrahedron");
  Eigen::Matrix3d D;
  D << x.col(1) - x.col(0), x.col(2) - x.col(0), x.col(3) - x.col(0);
  return D;
}

double meanRatio(const Coords& x, const ReferenceFrame& W) {
  const Eigen::Matrix3d D = differenceMatrix(x);
  if (!(D.determinant() > 0.0)) return 0.0;
  const Eigen::Matrix3d S = D * W.inverse();
  return 3.0 * std::cbrt(S.determinant() * S.determinant()) / S.squaredNorm();
}

Coords meanRatioGradient(const Coords& x, const ReferenceFrame& W) {
  const Eigen::Matrix3d D = differenceMatrix(x);
  Coords g = Coords::Zero(3, 4);
  if (!(D.determinant() > 0.0)) return g;
  const Eigen::Matrix3d S = D * W.inverse();
  const double q = 3.0 * std::cbrt(S.determinant() * S.determinant()) / S.squaredNorm();
  // d ln q = (2/3) tr(D^{-1} dD) - 2 tr(S^T dD W^{-1}) / |S|^2
  const Eigen::Matrix3d dD =
      q * ((2.0 / 3.0) * D.inverse().transpose() -
           (2.0 / S.squaredNorm()) * S * W.inverse().transpose());
  g.rightCols(3) = dD;
  g.col(0) = -dD.rowwise().sum();
  return g;
}

VolumeEquivalence meanRatioVolumeEquivalence(const Coords& x, const ReferenceFrame& W) {
  const Eigen::Matrix3d S = differenceMatrix(x) * W.inverse();
  const double q = meanRatio(x, W);
  const Coords scaled = x / S.norm();
  return {std::pow(q, 1.5), tetSignedVolume(scaled)};
}

std::string_view toString(Measure m) {
  switch (m) {
    case Measure::MeanVolumeSum: return "mean-volume";
    case Measure::ProductSquared: return "q1";
    case Measure::InverseSquaredSum: return "q2";
    case Measure::MeanRatio: return "mean-ratio";
    case Measure::IsoperimetricQuotient: return "iq";
  }
  return "unknown";
}

std::string_view toString(Combiner c) {
  switch (c) {
    case Combiner::ArithmeticMean: return "mean";
    case Combiner::Sum: return "sum";
    case Combiner::Min: return "min";
  }
  return "unknown";
}

Measure parseMeasure(std::string_view name) {
  for (Measure m : {Measure::MeanVolumeSum, Measure::ProductSquared, Measure::InverseSquaredSum,
                    Measure::MeanRatio, Measure::IsoperimetricQuotient}) {
    if (toString(m) == name) return m;
  }
  throw Error(ErrorCode::InvalidSpec, "unknown measure '" + std::string(name) + "'");
}

Combiner parseCombiner(std::string_view name) {
  for (Combiner c : {Combiner::ArithmeticMean, Combiner::Sum, Combiner::Min}) {
    if (toString(c) == name) return c;
  }
  throw Error(ErrorCode::InvalidSpec, "unknown combiner '" + std::string(name) + "'");
}

namespace {

double shiftedVolume(const Element& e, const Coords& x, double shift, Index id) {
  const double v = elementMeanVolume(e.kind, x) + shift;
  if (!(v > 0.0)) {
    throw Error(ErrorCode::NonPositiveVolume,
                "element " + std::to_string(id) + " has nonpositive (shifted) mean volume");
  }
  return v;
}

void requireTetra(const Mesh& mesh) {
  if (!mesh.allTetra()) {
    throw Error(ErrorCode::MixedMeshMeanRatio, "mean ratio is defined for tetrahedral meshes only");
  }
}

std::vector<double> elementValues(const Mesh& mesh, const Coords& coords,
                                  const QualityMeasureSpec& spec) {
  const double shift = spec.volumeShift.value_or(0.0);
  if (spec.measure == Measure::MeanRatio) requireTetra(mesh);
  std::vector<double> values;
  values.reserve(mesh.elements.size());
  for (Index id = 0; id < mesh.elementCount(); ++id) {
    const Element& e = mesh.elements[id];
    const Coords x = elementCoords(coords, e);
    switch (spec.measure) {
      case Measure::MeanVolumeSum:
        values.push_back(elementMeanVolume(e.kind, x));
        break;
      case Measure::ProductSquared: {
        const double v = shiftedVolume(e, x, shift, id);
        values.push_back(v * v);
        break;
      }
      case Measure::InverseSquaredSum: {
        const double v = shiftedVolume(e, x, shift, id);
        values.push_back(-1.0 / (v * v));
        break;
      }
      case Measure::MeanRatio:
        values.push_back(meanRatio(x));
        break;
      case Measure::IsoperimetricQuotient:
        values.push_back(elementIQ(e.kind, x));
        break;
    }
  }
  return values;
}

double combine(const std::vector<double>& values, const QualityMeasureSpec& spec) {
  if (values.empty()) return 0.0;
  if (spec.measure == Measure::ProductSquared) {
    double logSum = 0.0;
    for (double v : values) logSum += std::log(v);
    return std::exp(logSum);
  }
  switch (spec.combiner) {
    case Combiner::Sum:
      return std::accumulate(values.begin(), values.end(), 0.0);
    case Combiner::ArithmeticMean:
      return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    case Combiner::Min:
      return *std::min_element(values.begin(), values.end());
  }
  return 0.0;
}

}  // namespace

QualityReport meshQuality(const Mesh& mesh, const Coords& coords, const QualityMeasureSpec& spec) {
  QualityReport report;
  report.spec = spec;
  report.perElement = elementValues(mesh, coords, spec);
  report.global = combine(report.perElement, spec);
  if (!report.perElement.empty()) {
    const auto [lo, hi] = std::minmax_element(report.perElement.begin(), report.perElement.end());
    report.min = *lo;
    report.max = *hi;
    report.mean = std::accumulate(report.perElement.begin(), report.perElement.end(), 0.0) /
                  static_cast<double>(report.perElement.size());
  }
  for (const Element& e : mesh.elements) {
    if (!(elementMeanVolume(e.kind, elementCoords(coords, e)) > 0.0)) ++report.invalidCount;
  }
  return report;
}

double globalQuality(const Mesh& mesh, const Coords& coords, const QualityMeasureSpec& spec) {
  return combine(elementValues(mesh, coords, spec), spec);
}

double logProductSquared(const Mesh& mesh, const Coords& coords, double shift) {
  double sum = 0.0;
  for (Index id = 0; id < mesh.elementCount(); ++id) {
    const Element& e = mesh.elements[id];
    sum += 2.0 * std::log(shiftedVolume(e, elementCoords(coords, e), shift, id));
  }
  return sum;
}

VertexField qualityGradientField(const Mesh& mesh, const Coords& coords,
                                 const QualityMeasureSpec& spec) {
  const double shift = spec.volumeShift.value_or(0.0);
  if (spec.measure == Measure::MeanRatio) requireTetra(mesh);

  auto elementGradient = [&](Index id) -> Coords {
    const Element& e = mesh.elements[id];
    const Coords x = elementCoords(coords, e);
    switch (spec.measure) {
      case Measure::MeanVolumeSum:
        return elementFieldX(e.kind, x) / 6.0;
      case Measure::ProductSquared:
        // d log(v^2) = 2 dv / v = X_e / (3 v); scaled by q1 below.
        return elementFieldX(e.kind, x) / (3.0 * shiftedVolume(e, x, shift, id));
      case Measure::InverseSquaredSum: {
        const double v = shiftedVolume(e, x, shift, id);
        return elementFieldX(e.kind, x) / (3.0 * v * v * v);
      }
      case Measure::MeanRatio:
        return meanRatioGradient(x);
      case Measure::IsoperimetricQuotient:
        return elementIQGradient(e.kind, x);
    }
    return Coords::Zero(3, x.cols());
  };

  VertexField field = VertexField::Zero(3, coords.cols());
  auto scatter = [&](Index id, double weight) {
    const Coords g = elementGradient(id);
    const Element& e = mesh.elements[id];
    for (std::size_t i = 0; i < e.vertices.size(); ++i) {
      field.col(e.vertices[i]) += weight * g.col(static_cast<Index>(i));
    }
  };

  if (spec.measure == Measure::ProductSquared) {
    const double q1 = std::exp(logProductSquared(mesh, coords, shift));
    for (Index id = 0; id < mesh.elementCount(); ++id) scatter(id, q1);
    return field;
  }
  switch (spec.combiner) {
    case Combiner::Sum:
      for (Index id = 0; id < mesh.elementCount(); ++id) scatter(id, 1.0);
      break;
    case Combiner::ArithmeticMean:
      for (Index id = 0; id < mesh.elementCount(); ++id) {
        scatter(id, 1.0 / static_cast<double>(mesh.elementCount()));
      }
      break;
    case Combiner::Min: {
      // One-sided: the gradient of the (first) minimizing element.
      const std::vector<double> values = elementValues(mesh, coords, spec);
      if (values.empty()) break;
      const auto it = std::min_element(values.begin(), values.end());
      scatter(static_cast<Index>(it - values.begin()), 1.0);
      break;
    }
  }
  return field;
}

double computeVolumeShift(const Mesh& mesh, const Coords& coords) {
  const double lo = minElementVolume(mesh, coords);
  if (lo > 0.0 || mesh.elements.empty()) return 0.0;
  if (lo < 0.0) return 2.0 * std::abs(lo);
  const double diag = detail::boundingBoxDiagonal(coords);
  return 1e-12 * diag * diag * diag;
}

}  // namespace getme
