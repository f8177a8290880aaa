#pragma once

#include "getme/geometry.hpp"
#include "getme/mesh.hpp"
#include "getme/quality.hpp"

#include <functional>
#include <string>
#include <vector>

namespace getme {

enum class Assembly { RawSum, ValenceAveraged };

/*
 * FixBoundary zeroes the field on boundary vertices and works in ambient
 * coordinates (no renormalization). Free applies x -> pi(x + sigma Psi(X))
 * on the normalized sphere N. ProjectToOriginalBoundary moves every vertex
 * and then snaps boundary vertices back onto the original boundary surface;
 * the snap replaces the rescaling, so it also works in ambient coordinates.
 */
enum class BoundaryPolicy { FixBoundary, ProjectToOriginalBoundary, Free };

struct Backtracking {
  double shrink = 0.5;
  int maxHalvings = 40;
};

struct SmoothingConfig {
  QualityMeasureSpec measure{Measure::ProductSquared, Combiner::Sum, std::nullopt};
  Assembly assembly = Assembly::RawSum;
  double sigma0 = 0.1;
  int maxIterations = 1000;
  double qualityTol = 1e-12;  // relative gain below which the run stalls
  double fieldTol = 1e-12;    // on the scale-free field norm
  BoundaryPolicy boundaryPolicy = BoundaryPolicy::FixBoundary;
  Backtracking backtracking;
  bool recordTrajectory = false;  // keep pi(coords) after every iteration
};

enum class Termination { FieldBelowTol, QualityStalled, MaxIterations, BacktrackingFailed };

std::string_view toString(Assembly a);
std::string_view toString(BoundaryPolicy p);
std::string_view toString(Termination t);
Assembly parseAssembly(std::string_view name);
BoundaryPolicy parseBoundaryPolicy(std::string_view name);

struct IterationRecord {
  int iteration = 0;
  double quality = 0;    // driver objective after the accepted step
  double sigma = 0;      // accepted step parameter
  double fieldNorm = 0;  // |X| |x - x_*|^{-d} before the step
};

struct SmoothingReport {
  std::string measure;
  std::string objective;  // what `quality` holds, e.g. "log(q1)"
  std::string boundaryPolicy;
  double degree = 0;
  double volumeShift = 0;
  double initialQuality = 0;
  int iterations = 0;
  Termination termination = Termination::MaxIterations;
  std::vector<IterationRecord> history;
  std::vector<Coords> trajectory;
};

struct SmoothingResult {
  Coords coords;  // in the frame of the input coordinates
  SmoothingReport report;
};

using ElementFieldProvider = std::function<Coords(Index id, const Element& e, const Coords& xe)>;

/// Scatters the element fields phi_e(provider(e)) and sums them. With
/// ValenceAveraged vertex i's total is divided by its valence.
VertexField assembleField(const Mesh& mesh, const Coords& coords,
                          const ElementFieldProvider& provider, Assembly assembly);

/// sum_e phi_e(X_e), optionally valence averaged.
VertexField meanVolumeField(const Mesh& mesh, const Coords& coords,
                            Assembly assembly = Assembly::RawSum);

/*
 * Ascent direction used by the smoother for each measure; positive
 * multiples of the quality gradient with global constants dropped:
 *   mean volume  sum X_e
 *   q1           sum X_e / vol
 *   q2           sum X_e / vol^3
 *   mean ratio / iq   sum of element gradients
 * The Min combiner keeps only the minimizing element.
 */
VertexField directionField(const Mesh& mesh, const Coords& coords,
                           const QualityMeasureSpec& spec, Assembly assembly);

/// Degree of homogeneity of the measure's direction field when no volume
/// shift is active.
double nominalDegree(Measure measure);

/// Quotient map onto N: subtract the vertex centroid, divide by the norm.
Coords projectPi(const Coords& coords);

/// Estimates d with |F(s x)| = s^d |F(x)| from s = 2 and s = 1/2.
double homogeneityDegree(const std::function<VertexField(const Coords&)>& field,
                         const Coords& coords);

/// |X|^{(1-d)/d} X, and 0 for X = 0.
VertexField psi(const VertexField& field, double degree);

/// Closest-point projection onto the triangulated boundary of a mesh
/// (quadrilaterals split along their shorter diagonal).
class BoundaryProjector {
 public:
  BoundaryProjector() = default;
  BoundaryProjector(const Mesh& mesh, const Coords& coords);

  Point3 project(const Point3& p) const;
  std::size_t triangleCount() const { return triangles_.size(); }

 private:
  std::vector<std::array<Point3, 3>> triangles_;
};

/// One smoothing step with the field evaluated at `coords`.
Coords tSigma(const Mesh& mesh, const Coords& coords, const SmoothingConfig& config, double sigma);

SmoothingResult smooth(const Mesh& mesh, const SmoothingConfig& config);
SmoothingResult smooth(const Mesh& mesh, const Coords& start, const SmoothingConfig& config);

/// Free-policy smoothing of a closed surface under its isoperimetric quotient.
SmoothingResult smoothSurfaceIQ(const SurfacePolyhedron& surface, const SmoothingConfig& config);

}  // namespace getme
