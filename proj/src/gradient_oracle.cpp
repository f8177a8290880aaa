#include "getme/gradient_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace getme {

namespace {

double stepFor(double h, double value) {
  return h > 0.0 ? h : 1e-6 * std::max(1.0, std::abs(value));
}

}  // namespace

VertexField fdGradient(const ScalarFunction& f, const Coords& coords, double h) {
  VertexField g(coords.rows(), coords.cols());
  Coords probe = coords;
  for (Index k = 0; k < coords.size(); ++k) {
    const double x = coords.data()[k];
    const double step = stepFor(h, x);
    probe.data()[k] = x + step;
    const double up = f(probe);
    probe.data()[k] = x - step;
    const double down = f(probe);
    probe.data()[k] = x;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw Error(ErrorCode::OracleDomainError, "non-finite value at coordinate " + std::to_string(k));
    }
    g.data()[k] = (up - down) / (2.0 * step);
  }
  return g;
}

Eigen::MatrixXd fdJacobian(const FieldFunction& field, const Coords& coords, double h) {
  const Index n = coords.size();
  Eigen::MatrixXd J(n, n);
  Coords probe = coords;
  for (Index k = 0; k < n; ++k) {
    const double x = coords.data()[k];
    const double step = stepFor(h, x);
    probe.data()[k] = x + step;
    const VertexField up = field(probe);
    probe.data()[k] = x - step;
    const VertexField down = field(probe);
    probe.data()[k] = x;
    if (!up.allFinite() || !down.allFinite()) {
      throw Error(ErrorCode::OracleDomainError, "non-finite field at coordinate " + std::to_string(k));
    }
    J.col(k) = (up - down).reshaped() / (2.0 * step);
  }
  return J;
}

double relativeError(const VertexField& analytic, const VertexField& reference) {
  const double denom = std::max({analytic.norm(), reference.norm(), 1e-30});
  return (analytic - reference).norm() / denom;
}

FieldCheckReport checkField(const std::string& name, const FieldFunction& analytic,
                            const ScalarFunction& f, const Sampler& sampler, int sampleCount,
                            double tol, std::uint64_t seed, double scale) {
  FieldCheckReport report;
  report.name = name;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < sampleCount; ++i) {
    const Coords x = sampler(rng);
    const VertexField a = analytic(x);
    const VertexField fd = scale * fdGradient(f, x);
    const double err = relativeError(a, fd);
    ++report.samples;
    if (err > report.maxRelativeError || i == 0) {
      report.maxRelativeError = std::max(report.maxRelativeError, err);
      report.worstNormRatio = a.norm() / std::max(fd.norm(), 1e-30);
      report.worstSample = x;
    }
  }
  report.pass = report.maxRelativeError <= tol;
  return report;
}

}  // namespace getme
