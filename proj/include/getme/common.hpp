#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace getme {

using Index = Eigen::Index;

/// Coordinates of a point set, one column per vertex (R^{3 x n}).
template <typename Scalar>
using Coords3X = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

using Coords = Coords3X<double>;
using Point3 = Vec3<double>;

/// Per-vertex 3-vector field over a mesh. Same layout as Coords.
using VertexField = Coords;

enum class ErrorCode {
  InvalidElement,
  InvalidSpec,
  InvalidPolygon,
  DegenerateElement,
  DegenerateMesh,
  NonPositiveVolume,
  MixedMeshMeanRatio,
  IsolatedVertex,
  NonHomogeneous,
  ZeroField,
  InvalidDegree,
  OracleDomainError,
  UnsupportedCellType,
  MalformedFile,
  IoFailure,
};

std::string_view toString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(toString(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace getme
