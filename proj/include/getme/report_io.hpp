#pragma once

#include "getme/gradient_oracle.hpp"
#include "getme/quality.hpp"
#include "getme/smoothing.hpp"

#include <json.hpp>

#include <string>

namespace getme {

/// {measure, combiner, global, min, max, mean, invalid_count, per_element}
nlohmann::ordered_json toJson(const QualityReport& report);

/// Scalars plus per-iteration arrays quality, sigma, field_norm.
nlohmann::ordered_json toJson(const SmoothingReport& report);

nlohmann::ordered_json toJson(const FieldCheckReport& report);

/// One row per iteration: iteration,quality,sigma,field_norm.
std::string toCsv(const SmoothingReport& report);

}  // namespace getme
