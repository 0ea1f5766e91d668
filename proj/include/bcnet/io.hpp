#pragma once

#include "bcnet/estimate.hpp"
#include "bcnet/model.hpp"
#include "bcnet/score.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace bcnet {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const Json& j, const std::filesystem::path& path);

Json variables_to_json(const std::vector<Variable>& vars);
std::vector<Variable> variables_from_json(const Json& j);

// {variables, arcs: [[parent, child]...], cpts: {child: {label: [p...]}},
//  score: {...}}; cpts and score only when present on the model.
Json model_to_json(const Model& m);
// Reads variables and arcs, plus cpts when present (rows must be
// distributions within 1e-9).
Model model_from_json(const Json& j);

// {model: [[parent, child]...], total_log_marginal, families: [{child,
//  parents, log_g, exact}]}
Json score_report_json(const Model& m, const ModelScore& s);

// Per-configuration report for one family: counts, phi, bounds, estimates.
Json estimate_report_json(const Dataset& d, const ParentContext& ctx,
                          const CountTable& t, const PriorSpec& prior,
                          const CompletionDistribution& phi,
                          const BcCellEstimate& e);

// User phi file: {child: {configuration label or "*": [p...]}}, or the flat
// form {configuration label: [p...]} that applies to every child.
PhiPolicy phi_policy_from_json(const Json& j);

std::string to_dot(const Model& m);

}  // namespace bcnet
