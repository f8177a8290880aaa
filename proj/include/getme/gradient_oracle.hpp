#pragma once

// Central finite differences, used to check every analytic gradient and
// field in this library against an independent evaluation.

#include "getme/common.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace getme {

using ScalarFunction = std::function<double(const Coords&)>;
using FieldFunction = std::function<VertexField(const Coords&)>;

/// (f(x + h e_k) - f(x - h e_k)) / 2h per coordinate. A nonpositive h selects
/// the default step 1e-6 * max(1, |x_k|).
VertexField fdGradient(const ScalarFunction& f, const Coords& coords, double h = 0.0);

/// Finite-difference Jacobian of a field, rows/cols in column-major
/// coordinate order (x_1, y_1, z_1, x_2, ...).
Eigen::MatrixXd fdJacobian(const FieldFunction& field, const Coords& coords, double h = 0.0);

/// |a - b| / max(|a|, |b|, 1e-30).
double relativeError(const VertexField& analytic, const VertexField& reference);

struct FieldCheckReport {
  std::string name;
  int samples = 0;
  double maxRelativeError = 0;
  double worstNormRatio = 1;  // |analytic| / |fd| at the worst sample
  Coords worstSample;
  bool pass = true;
};

using Sampler = std::function<Coords(std::mt19937_64&)>;

/// Compares analytic(x) with scale * fdGradient(f, x) over sampleCount draws.
FieldCheckReport checkField(const std::string& name, const FieldFunction& analytic,
                            const ScalarFunction& f, const Sampler& sampler, int sampleCount,
                            double tol, std::uint64_t seed = 0, double scale = 1.0);

}  // namespace getme
