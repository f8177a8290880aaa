#include "getme/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>

namespace getme {

std::string_view toString(Assembly a) {
  return a == Assembly::RawSum ? "raw" : "averaged";
}

std::string_view toString(BoundaryPolicy p) {
  switch (p) {
    case BoundaryPolicy::FixBoundary: return "fix";
    case BoundaryPolicy::ProjectToOriginalBoundary: return "project";
    case BoundaryPolicy::Free: return "free";
  }
  return "unknown";
}

std::string_view toString(Termination t) {
  switch (t) {
    case Termination::FieldBelowTol: return "FieldBelowTol";
    case Termination::QualityStalled: return "QualityStalled";
    case Termination::MaxIterations: return "MaxIterations";
    case Termination::BacktrackingFailed: return "BacktrackingFailed";
  }
  return "unknown";
}

Assembly parseAssembly(std::string_view name) {
  if (name == "raw") return Assembly::RawSum;
  if (name == "averaged") return Assembly::ValenceAveraged;
  throw Error(ErrorCode::InvalidSpec, "unknown assembly '" + std::string(name) + "'");
}

BoundaryPolicy parseBoundaryPolicy(std::string_view name) {
  for (BoundaryPolicy p : {BoundaryPolicy::FixBoundary, BoundaryPolicy::ProjectToOriginalBoundary,
                           BoundaryPolicy::Free}) {
    if (toString(p) == name) return p;
  }
  throw Error(ErrorCode::InvalidSpec, "unknown boundary policy '" + std::string(name) + "'");
}

VertexField assembleField(const Mesh& mesh, const Coords& coords,
                          const ElementFieldProvider& provider, Assembly assembly) {
  VertexField field = VertexField::Zero(3, coords.cols());
  for (Index id = 0; id < mesh.elementCount(); ++id) {
    const Element& e = mesh.elements[id];
    const Coords fe = provider(id, e, elementCoords(coords, e));
    for (std::size_t i = 0; i < e.vertices.size(); ++i) {
      field.col(e.vertices[i]) += fe.col(static_cast<Index>(i));
    }
  }
  if (assembly == Assembly::ValenceAveraged) {
    for (Index i = 0; i < field.cols(); ++i) {
      if (mesh.valence[i] == 0) {
        throw Error(ErrorCode::IsolatedVertex,
                    "vertex " + std::to_string(i) + " belongs to no element");
      }
      field.col(i) /= static_cast<double>(mesh.valence[i]);
    }
  }
  return field;
}

VertexField meanVolumeField(const Mesh& mesh, const Coords& coords, Assembly assembly) {
  return assembleField(
      mesh, coords, [](Index, const Element& e, const Coords& xe) { return elementFieldX(e.kind, xe); },
      assembly);
}

double nominalDegree(Measure measure) {
  switch (measure) {
    case Measure::MeanVolumeSum: return 2.0;
    case Measure::ProductSquared: return -1.0;
    case Measure::InverseSquaredSum: return -7.0;
    case Measure::MeanRatio:
    case Measure::IsoperimetricQuotient: return -1.0;
  }
  return 1.0;
}

VertexField directionField(const Mesh& mesh, const Coords& coords,
                           const QualityMeasureSpec& spec, Assembly assembly) {
  const double shift = spec.volumeShift.value_or(0.0);
  if (spec.measure == Measure::MeanRatio && !mesh.allTetra()) {
    throw Error(ErrorCode::MixedMeshMeanRatio, "mean ratio is defined for tetrahedral meshes only");
  }
  std::optional<Index> only;
  if (spec.combiner == Combiner::Min && spec.measure != Measure::ProductSquared) {
    const QualityReport r = meshQuality(mesh, coords, spec);
    if (!r.perElement.empty()) {
      only = std::min_element(r.perElement.begin(), r.perElement.end()) - r.perElement.begin();
    }
  }
  auto volume = [&](Index id, const Element& e, const Coords& xe) {
    const double v = elementMeanVolume(e.kind, xe) + shift;
    if (!(v > 0.0)) {
      throw Error(ErrorCode::NonPositiveVolume,
                  "element " + std::to_string(id) + " has nonpositive (shifted) mean volume");
    }
    return v;
  };
  return assembleField(
      mesh, coords,
      [&](Index id, const Element& e, const Coords& xe) -> Coords {
        if (only && *only != id) return Coords::Zero(3, xe.cols());
        switch (spec.measure) {
          case Measure::MeanVolumeSum: return elementFieldX(e.kind, xe);
          case Measure::ProductSquared: return elementFieldX(e.kind, xe) / volume(id, e, xe);
          case Measure::InverseSquaredSum: {
            const double v = volume(id, e, xe);
            return elementFieldX(e.kind, xe) / (v * v * v);
          }
          case Measure::MeanRatio: return meanRatioGradient(xe);
          case Measure::IsoperimetricQuotient: return elementIQGradient(e.kind, xe);
        }
        return Coords::Zero(3, xe.cols());
      },
      assembly);
}

Coords projectPi(const Coords& coords) {
  const Coords centered = coords.colwise() - coords.rowwise().mean();
  const double norm = centered.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::DegenerateMesh, "all vertices coincide");
  return centered / norm;
}

double homogeneityDegree(const std::function<VertexField(const Coords&)>& field,
                         const Coords& coords) {
  const double base = field(coords).norm();
  if (!(base > 0.0)) throw Error(ErrorCode::ZeroField, "field vanishes at the sample point");
  const double up = field(2.0 * coords).norm();
  const double down = field(0.5 * coords).norm();
  const double dUp = std::log2(up / base);
  const double dDown = -std::log2(down / base);
  if (!std::isfinite(dUp) || !std::isfinite(dDown) || std::abs(dUp - dDown) > 1e-8) {
    throw Error(ErrorCode::NonHomogeneous, "degree estimates " + std::to_string(dUp) + " and " +
                                               std::to_string(dDown) + " disagree");
  }
  return 0.5 * (dUp + dDown);
}

VertexField psi(const VertexField& field, double degree) {
  if (std::abs(degree) < 1e-12) throw Error(ErrorCode::InvalidDegree, "degree must be nonzero");
  const double norm = field.norm();
  if (norm == 0.0) return VertexField::Zero(field.rows(), field.cols());
  return std::pow(norm, (1.0 - degree) / degree) * field;
}

namespace {

Point3 closestOnTriangle(const Point3& p, const Point3& a, const Point3& b, const Point3& c) {
  const Point3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Point3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;
  const Point3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

}  // namespace

BoundaryProjector::BoundaryProjector(const Mesh& mesh, const Coords& coords) {
  for (const BoundaryFace& f : boundaryFaces(mesh)) {
    const auto& v = f.vertices;
    auto p = [&](std::size_t i) -> Point3 { return coords.col(v[i]); };
    if (v.size() == 3) {
      triangles_.push_back({p(0), p(1), p(2)});
    } else if ((p(0) - p(2)).squaredNorm() <= (p(1) - p(3)).squaredNorm()) {
      triangles_.push_back({p(0), p(1), p(2)});
      triangles_.push_back({p(0), p(2), p(3)});
    } else {
      triangles_.push_back({p(0), p(1), p(3)});
      triangles_.push_back({p(1), p(2), p(3)});
    }
  }
}

Point3 BoundaryProjector::project(const Point3& p) const {
  Point3 best = p;
  double bestDist = std::numeric_limits<double>::infinity();
  for (const auto& [a, b, c] : triangles_) {
    const Point3 q = closestOnTriangle(p, a, b, c);
    const double d = (q - p).squaredNorm();
    if (d < bestDist) {
      bestDist = d;
      best = q;
    }
  }
  return best;
}

namespace {

struct Problem {
  std::function<double(const Coords&)> objective;
  std::function<VertexField(const Coords&)> field;
  std::function<bool(const Coords& before, const Coords& after)> admissible;
  std::function<Coords(const Coords&, const VertexField&, double)> step;
  bool onSphere = false;
  double nominal = 1.0;
  bool measureDegree = true;
  std::string measure;
  std::string objectiveName;
};

double degreeFor(const Problem& problem, const Coords& x) {
  if (!problem.measureDegree) return problem.nominal;
  try {
    return homogeneityDegree(problem.field, x);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonHomogeneous) return problem.nominal;
    throw;
  }
}

double relativeFieldNorm(const VertexField& field, const Coords& x, double degree) {
  const double scale = (x.colwise() - x.rowwise().mean()).norm();
  return field.norm() * std::pow(scale, -degree);
}

SmoothingResult runDriver(const Problem& problem, const Coords& start, const SmoothingConfig& config) {
  if (!(config.sigma0 > 0.0)) throw Error(ErrorCode::InvalidSpec, "sigma0 must be positive");
  const double beta = config.backtracking.shrink;
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorCode::InvalidSpec, "shrink must be in (0,1)");

  SmoothingResult result;
  SmoothingReport& report = result.report;
  report.measure = problem.measure;
  report.objective = problem.objectiveName;

  Coords x = start;
  Point3 origin = Point3::Zero();
  double scale = 1.0;
  if (problem.onSphere) {
    origin = start.rowwise().mean();
    scale = (start.colwise() - origin).norm();
    x = projectPi(start);
  }
  double q = problem.objective(x);
  report.initialQuality = q;

  std::optional<double> degree;
  double sigmaPrev = config.sigma0;
  report.termination = Termination::MaxIterations;
  for (int iter = 0; iter < config.maxIterations; ++iter) {
    const VertexField X = problem.field(x);
    if (X.norm() == 0.0) {
      report.termination = Termination::FieldBelowTol;
      break;
    }
    if (!degree) degree = degreeFor(problem, x);
    const double fieldNorm = relativeFieldNorm(X, x, *degree);
    if (fieldNorm < config.fieldTol) {
      report.termination = Termination::FieldBelowTol;
      break;
    }
    const VertexField direction = psi(X, *degree);

    // Warm start from the last accepted sigma, capped by sigma0.
    double sigma = std::min(config.sigma0, sigmaPrev / beta);
    std::optional<Coords> accepted;
    double qNew = q;
    for (int h = 0; h <= config.backtracking.maxHalvings; ++h, sigma *= beta) {
      Coords candidate = problem.step(x, direction, sigma);
      if (!candidate.allFinite() || !problem.admissible(x, candidate)) continue;
      double qc;
      try {
        qc = problem.objective(candidate);
      } catch (const Error&) {
        continue;
      }
      if (std::isfinite(qc) && qc > q) {
        accepted = std::move(candidate);
        qNew = qc;
        break;
      }
    }
    if (!accepted) {
      report.termination = Termination::BacktrackingFailed;
      break;
    }

    const double gain = qNew - q;
    x = std::move(*accepted);
    q = qNew;
    sigmaPrev = sigma;
    report.history.push_back({iter + 1, q, sigma, fieldNorm});
    report.iterations = iter + 1;
    if (config.recordTrajectory) report.trajectory.push_back(projectPi(x));
    if (gain <= config.qualityTol * std::max(1.0, std::abs(q))) {
      report.termination = Termination::QualityStalled;
      break;
    }
  }
  report.degree = degree.value_or(problem.nominal);
  result.coords = problem.onSphere ? Coords((scale * x).colwise() + origin) : x;
  return result;
}

Problem meshProblem(const Mesh& mesh, const Coords& start, const SmoothingConfig& config,
                    QualityMeasureSpec& spec, std::shared_ptr<BoundaryProjector>& projector) {
  const bool onSphere = config.boundaryPolicy == BoundaryPolicy::Free;
  spec = config.measure;
  const bool shiftable =
      spec.measure == Measure::ProductSquared || spec.measure == Measure::InverseSquaredSum;
  if (shiftable && !spec.volumeShift) {
    const double s = computeVolumeShift(mesh, onSphere ? projectPi(start) : start);
    if (s > 0.0) spec.volumeShift = s;
  }
  if (config.boundaryPolicy == BoundaryPolicy::ProjectToOriginalBoundary) {
    projector = std::make_shared<BoundaryProjector>(mesh, mesh.vertices);
  }

  Problem p;
  p.onSphere = onSphere;
  p.nominal = nominalDegree(spec.measure);
  p.measureDegree = spec.volumeShift.value_or(0.0) == 0.0;
  p.measure = std::string(toString(spec.measure));
  if (spec.measure == Measure::ProductSquared) {
    const double shift = spec.volumeShift.value_or(0.0);
    p.objective = [&mesh, shift](const Coords& x) { return logProductSquared(mesh, x, shift); };
    p.objectiveName = "log(q1)";
  } else {
    p.objective = [&mesh, spec](const Coords& x) { return globalQuality(mesh, x, spec); };
    p.objectiveName = std::string(toString(spec.measure)) + "/" + std::string(toString(spec.combiner));
  }
  const bool fix = config.boundaryPolicy == BoundaryPolicy::FixBoundary;
  const Assembly assembly = config.assembly;
  p.field = [&mesh, spec, fix, assembly](const Coords& x) {
    VertexField X = directionField(mesh, x, spec, assembly);
    if (fix) {
      for (Index i = 0; i < X.cols(); ++i) {
        if (mesh.boundary[i]) X.col(i).setZero();
      }
    }
    return X;
  };
  // Elements that start valid must stay valid.
  p.admissible = [&mesh](const Coords& before, const Coords& after) {
    for (const Element& e : mesh.elements) {
      if (elementMeanVolume(e.kind, elementCoords(before, e)) > 0.0 &&
          !(elementMeanVolume(e.kind, elementCoords(after, e)) > 0.0)) {
        return false;
      }
    }
    return true;
  };
  switch (config.boundaryPolicy) {
    case BoundaryPolicy::Free:
      p.step = [](const Coords& x, const VertexField& d, double sigma) {
        return projectPi(x + sigma * d);
      };
      break;
    case BoundaryPolicy::FixBoundary:
      p.step = [](const Coords& x, const VertexField& d, double sigma) -> Coords {
        return x + sigma * d;
      };
      break;
    case BoundaryPolicy::ProjectToOriginalBoundary:
      p.step = [&mesh, proj = projector](const Coords& x, const VertexField& d, double sigma) {
        Coords y = x + sigma * d;
        for (Index i = 0; i < y.cols(); ++i) {
          if (mesh.boundary[i]) y.col(i) = proj->project(y.col(i));
        }
        return y;
      };
      break;
  }
  return p;
}

}  // namespace

Coords tSigma(const Mesh& mesh, const Coords& coords, const SmoothingConfig& config, double sigma) {
  QualityMeasureSpec spec;
  std::shared_ptr<BoundaryProjector> projector;
  const Problem p = meshProblem(mesh, coords, config, spec, projector);
  if (sigma == 0.0) return coords;
  const VertexField X = p.field(coords);
  if (X.norm() == 0.0) return p.step(coords, X, sigma);
  return p.step(coords, psi(X, degreeFor(p, coords)), sigma);
}

SmoothingResult smooth(const Mesh& mesh, const SmoothingConfig& config) {
  return smooth(mesh, mesh.vertices, config);
}

SmoothingResult smooth(const Mesh& mesh, const Coords& start, const SmoothingConfig& config) {
  if (start.cols() != mesh.vertexCount()) {
    throw Error(ErrorCode::InvalidSpec, "coordinate count does not match the mesh");
  }
  QualityMeasureSpec spec;
  std::shared_ptr<BoundaryProjector> projector;
  const Problem p = meshProblem(mesh, start, config, spec, projector);
  SmoothingResult result = runDriver(p, start, config);
  result.report.volumeShift = spec.volumeShift.value_or(0.0);
  result.report.boundaryPolicy = std::string(toString(config.boundaryPolicy));
  return result;
}

SmoothingResult smoothSurfaceIQ(const SurfacePolyhedron& surface, const SmoothingConfig& config) {
  const std::span<const Triangle> tris(surface.triangles);
  Problem p;
  p.onSphere = true;
  p.nominal = -1.0;
  p.measure = "iq";
  p.objectiveName = "iq";
  p.objective = [tris](const Coords& x) { return surfaceIQ(x, tris); };
  p.field = [tris](const Coords& x) { return surfaceIQGradient(x, tris); };
  p.admissible = [tris](const Coords&, const Coords& after) { return surfaceVolume(after, tris) > 0.0; };
  p.step = [](const Coords& x, const VertexField& d, double sigma) { return projectPi(x + sigma * d); };
  SmoothingResult result = runDriver(p, surface.vertices, config);
  result.report.boundaryPolicy = std::string(toString(BoundaryPolicy::Free));
  return result;
}

}  // namespace getme
