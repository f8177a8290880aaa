#include "getme/report_io.hpp"

#include <cstdio>

namespace getme {

nlohmann::ordered_json toJson(const QualityReport& report) {
  nlohmann::ordered_json j;
  j["measure"] = toString(report.spec.measure);
  j["combiner"] = report.spec.measure == Measure::ProductSquared
                      ? std::string("product")
                      : std::string(toString(report.spec.combiner));
  j["global"] = report.global;
  j["min"] = report.min;
  j["max"] = report.max;
  j["mean"] = report.mean;
  j["invalid_count"] = report.invalidCount;
  j["volume_shift"] = report.spec.volumeShift.value_or(0.0);
  j["per_element"] = report.perElement;
  return j;
}

nlohmann::ordered_json toJson(const SmoothingReport& report) {
  nlohmann::ordered_json j;
  j["measure"] = report.measure;
  j["objective"] = report.objective;
  j["boundary"] = report.boundaryPolicy;
  j["degree"] = report.degree;
  j["volume_shift"] = report.volumeShift;
  j["initial_quality"] = report.initialQuality;
  j["iterations"] = report.iterations;
  j["termination"] = toString(report.termination);
  auto column = [&](auto member) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const IterationRecord& r : report.history) a.push_back(r.*member);
    return a;
  };
  j["quality"] = column(&IterationRecord::quality);
  j["sigma"] = column(&IterationRecord::sigma);
  j["field_norm"] = column(&IterationRecord::fieldNorm);
  return j;
}

nlohmann::ordered_json toJson(const FieldCheckReport& report) {
  nlohmann::ordered_json j;
  j["name"] = report.name;
  j["samples"] = report.samples;
  j["max_relative_error"] = report.maxRelativeError;
  j["worst_norm_ratio"] = report.worstNormRatio;
  j["pass"] = report.pass;
  return j;
}

std::string toCsv(const SmoothingReport& report) {
  std::string out = "iteration,quality,sigma,field_norm\n";
  char buf[128];
  for (const IterationRecord& r : report.history) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.iteration, r.quality, r.sigma,
                  r.fieldNorm);
    out += buf;
  }
  return out;
}

}  // namespace getme
