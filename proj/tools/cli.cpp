#include "cli.hpp"

#include "getme/generators.hpp"
#include "getme/gradient_suite.hpp"
#include "getme/mesh_io.hpp"
#include "getme/quality.hpp"
#include "getme/report_io.hpp"
#include "getme/smoothing.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace getme::cli {

namespace {

int exitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec:
      return Usage;
    case ErrorCode::InvalidElement:
    case ErrorCode::NonPositiveVolume:
    case ErrorCode::MixedMeshMeanRatio:
    case ErrorCode::IsolatedVertex:
    case ErrorCode::UnsupportedCellType:
    case ErrorCode::MalformedFile:
    case ErrorCode::IoFailure:
      return InputError;
    default:
      return NumericalFailure;
  }
}

void writeText(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error(ErrorCode::IoFailure, "write failed for " + path);
}

bool endsWith(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string reportText(const SmoothingReport& report, const std::string& path) {
  return endsWith(path, ".csv") ? toCsv(report) : toJson(report).dump(2) + "\n";
}

std::vector<double> elementVolumes(const Mesh& mesh, const Coords& coords) {
  std::vector<double> v;
  for (const Element& e : mesh.elements) v.push_back(elementMeanVolume(e.kind, elementCoords(coords, e)));
  return v;
}

struct QualityArgs {
  std::string in;
  std::string measure = "mean-ratio";
  std::string combiner = "mean";
  double shift = 0.0;
};

struct SmoothArgs {
  std::string in, out, report;
  std::string measure = "q1";
  std::string combiner = "sum";
  std::string boundary = "fix";
  std::string assembly = "raw";
  double sigma0 = 0.1;
  int maxIter = 1000;
  double qualityTol = 1e-12;
  double fieldTol = 1e-12;
};

struct CheckArgs {
  int samples = 20;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

struct GenerateArgs {
  std::string spec, out;
  int size = 2;
  std::vector<double> inner;
  std::uint64_t seed = 0;
  double perturb = 0.0;
  bool perturbBoundary = false;
};

struct DemoArgs {
  double perturb = 0.05;
  std::uint64_t seed = 0;
  int maxIter = 5000;
  std::string report;
};

int runQuality(const QualityArgs& a, std::ostream& out) {
  QualityMeasureSpec spec{parseMeasure(a.measure), parseCombiner(a.combiner), std::nullopt};
  if (a.shift > 0.0) spec.volumeShift = a.shift;
  const Mesh mesh = readMesh(std::filesystem::path(a.in));
  out << toJson(meshQuality(mesh, mesh.vertices, spec)).dump(2) << '\n';
  return Success;
}

int runSmooth(const SmoothArgs& a, std::ostream& out) {
  SmoothingConfig config;
  config.measure = {parseMeasure(a.measure), parseCombiner(a.combiner), std::nullopt};
  config.boundaryPolicy = parseBoundaryPolicy(a.boundary);
  config.assembly = parseAssembly(a.assembly);
  config.sigma0 = a.sigma0;
  config.maxIterations = a.maxIter;
  config.qualityTol = a.qualityTol;
  config.fieldTol = a.fieldTol;

  const Mesh mesh = readMesh(std::filesystem::path(a.in));
  const SmoothingResult result = smooth(mesh, config);

  MeshAttributes attributes;
  attributes.cellScalars.emplace_back("mean_volume", elementVolumes(mesh, result.coords));
  writeMesh(mesh, result.coords, std::filesystem::path(a.out), attributes);
  if (!a.report.empty()) {
    writeText(a.report, reportText(result.report, a.report));
  } else {
    out << toJson(result.report).dump(2) << '\n';
  }
  return result.report.termination == Termination::BacktrackingFailed ? NumericalFailure : Success;
}

int runCheck(const CheckArgs& a, std::ostream& out) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  bool pass = true;
  for (const FieldCheckReport& r : runGradientSuite(a.samples, a.tol, a.seed)) {
    j.push_back(toJson(r));
    pass = pass && r.pass;
  }
  out << j.dump(2) << '\n';
  return pass ? Success : NumericalFailure;
}

int runGenerate(const GenerateArgs& a) {
  GeneratorSpec spec = parseGeneratorName(a.spec);
  spec.gridSize = a.size;
  if (!a.inner.empty()) {
    if (a.inner.size() != 3) throw Error(ErrorCode::InvalidSpec, "--inner needs x,y,z");
    spec.innerVertex = Point3(a.inner[0], a.inner[1], a.inner[2]);
  }
  spec.seed = a.seed;
  spec.perturbation = a.perturb;
  spec.perturbBoundary = a.perturbBoundary;
  const Mesh mesh = generateMesh(spec);
  writeMesh(mesh, mesh.vertices, std::filesystem::path(a.out));
  return Success;
}

int runDemo(const DemoArgs& a, std::ostream& out) {
  SurfacePolyhedron ico = icosahedronSurface();
  const std::span<const Triangle> tris(ico.triangles);
  const double target = surfaceIQ(ico.vertices, tris);
  std::mt19937_64 rng(a.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  for (Index i = 0; i < ico.vertices.cols(); ++i) {
    Point3 dir(normal(rng), normal(rng), normal(rng));
    ico.vertices.col(i) += a.perturb * std::cbrt(uniform(rng)) * dir.normalized();
  }
  SmoothingConfig config;
  config.boundaryPolicy = BoundaryPolicy::Free;
  config.maxIterations = a.maxIter;
  config.qualityTol = 0.0;
  const SmoothingResult result = smoothSurfaceIQ(ico, config);

  char line[96];
  std::snprintf(line, sizeof line, "%6d %.15f\n", 0, result.report.initialQuality);
  out << "# iteration iq\n" << line;
  for (const IterationRecord& r : result.report.history) {
    std::snprintf(line, sizeof line, "%6d %.15f\n", r.iteration, r.quality);
    out << line;
  }
  const double final = result.report.history.empty() ? result.report.initialQuality
                                                     : result.report.history.back().quality;
  std::snprintf(line, sizeof line, "# regular %.15f gap %.3e termination %s\n", target,
                target - final, std::string(toString(result.report.termination)).c_str());
  out << line;
  if (!a.report.empty()) writeText(a.report, reportText(result.report, a.report));
  return Success;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Global optimization-based GETMe smoothing for mixed volume meshes", "getme"};
  app.require_subcommand(1);

  QualityArgs qa;
  auto* quality = app.add_subcommand("quality", "Report mesh quality as JSON");
  quality->add_option("--in", qa.in, "Input mesh (legacy VTK)")->required();
  quality->add_option("--measure", qa.measure, "mean-volume|q1|q2|mean-ratio|iq")->required();
  quality->add_option("--combiner", qa.combiner, "mean|sum|min");
  quality->add_option("--shift", qa.shift, "Volume shift for q1/q2");

  SmoothArgs sa;
  auto* smoothCmd = app.add_subcommand("smooth", "Smooth a mesh");
  smoothCmd->add_option("--in", sa.in, "Input mesh")->required();
  smoothCmd->add_option("--out", sa.out, "Output mesh")->required();
  smoothCmd->add_option("--measure", sa.measure, "mean-volume|q1|q2|mean-ratio|iq")->required();
  smoothCmd->add_option("--combiner", sa.combiner, "mean|sum|min");
  smoothCmd->add_option("--sigma0", sa.sigma0, "Initial step parameter");
  smoothCmd->add_option("--max-iter", sa.maxIter, "Iteration limit");
  smoothCmd->add_option("--boundary", sa.boundary, "fix|project|free");
  smoothCmd->add_option("--assembly", sa.assembly, "raw|averaged");
  smoothCmd->add_option("--quality-tol", sa.qualityTol, "Relative gain that counts as stalled");
  smoothCmd->add_option("--field-tol", sa.fieldTol, "Scale-free field norm tolerance");
  smoothCmd->add_option("--report", sa.report, "Report path (.json or .csv)");

  CheckArgs ca;
  auto* check = app.add_subcommand("check-gradients", "Compare analytic gradients with finite differences");
  check->add_option("--samples", ca.samples, "Samples per field");
  check->add_option("--tol", ca.tol, "Relative error tolerance");
  check->add_option("--seed", ca.seed, "Random seed");

  GenerateArgs ga;
  auto* generate = app.add_subcommand("generate", "Write a generated mesh");
  generate->add_option("--spec", ga.spec, "Generator name")
      ->required()
      ->check(CLI::IsMember(generatorNames()));
  generate->add_option("--size", ga.size, "Grid size k (k^3 cells)");
  generate->add_option("--inner", ga.inner, "Inner vertex x,y,z for inner-vertex")->delimiter(',');
  generate->add_option("--seed", ga.seed, "Random seed");
  generate->add_option("--perturb", ga.perturb, "Maximum vertex displacement");
  generate->add_flag("--perturb-boundary", ga.perturbBoundary, "Also move boundary vertices");
  generate->add_option("--out", ga.out, "Output mesh")->required();

  DemoArgs da;
  auto* demo = app.add_subcommand("demo-icosahedron", "Smooth a perturbed icosahedron under iq");
  demo->add_option("--perturb", da.perturb, "Maximum vertex displacement (unit edge)");
  demo->add_option("--seed", da.seed, "Random seed");
  demo->add_option("--max-iter", da.maxIter, "Iteration limit");
  demo->add_option("--report", da.report, "Report path (.json or .csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? Success : Usage;
  }

  try {
    if (*quality) return runQuality(qa, out);
    if (*smoothCmd) return runSmooth(sa, out);
    if (*check) return runCheck(ca, out);
    if (*generate) return runGenerate(ga);
    if (*demo) return runDemo(da, out);
  } catch (const Error& e) {
    err << "getme: " << e.what() << '\n';
    return exitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "getme: " << e.what() << '\n';
    return NumericalFailure;
  }
  return Usage;
}

}  // namespace getme::cli
