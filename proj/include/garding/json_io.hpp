#pragma once

#include <string>

#include <json.hpp>

#include "garding/abp.hpp"
#include "garding/dual_cone.hpp"
#include "garding/envelope.hpp"
#include "garding/field.hpp"
#include "garding/grid.hpp"

namespace garding {

using json = nlohmann::json;

/// GridFunction schema: {shape, spacing, values row-major, mask row-major}.
json to_json(const GridFunction& u);
GridFunction grid_function_from_json(const json& j);

/// Problem bundle schema: {domain, A (row-major per node, upper triangle),
/// b, c, u}; f is recomputed on load.
json to_json(const ManufacturedProblem& problem);
ManufacturedProblem problem_from_json(const json& j);

json to_json(const ContactSetResult& result);

json to_json(const EstimateReport& report);

json to_json(const DualEvalResult& result);

json to_json(const ConeLabel& label);

/// Frozen CSV schema (v1) for report rows; one header line plus one row per
/// report, plot-ready.
std::string reports_to_csv(const std::vector<EstimateReport>& reports);

json load_json_file(const std::string& path);  // throws std::runtime_error when unreadable
void save_text_file(const std::string& path, const std::string& text);

}  // namespace garding
