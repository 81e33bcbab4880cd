#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "capalloc/model.hpp"
#include "capalloc/policies.hpp"
#include "capalloc/sim.hpp"
#include "capalloc/solver.hpp"
#include "capalloc/structure.hpp"

namespace capalloc {

using Json = nlohmann::json;

/// Keys: K, M, A, lambda, ce, co, load, q (optional), seed (optional). Unknown keys and
/// values of the wrong type raise InvalidInput; the result is validated.
ProblemConfig config_from_json(const Json& doc);
Json to_json(const ProblemConfig& config);
ProblemConfig load_config(const std::filesystem::path& path);

/// {"kind": "threshold", "K", "M", "A", "thresholds": [...]} or
/// {"kind": "tabular", "K", "M", "A", "actions": [[y_0, ..., y_{K-1}], ...]} with one
/// entry per state index.
Json to_json(const AnyPolicy& policy, const ProblemConfig& config);
/// Checks K and A against `config` (M is informational) and validates the actions.
AnyPolicy policy_from_json(const Json& doc, const ProblemConfig& config);
AnyPolicy load_policy(const std::filesystem::path& path, const ProblemConfig& config);

Json to_json(const Evaluation& evaluation, bool include_bias = true);
Json to_json(const CheckReport& report);
Json to_json(const SimResult& result);

std::string sim_csv_header();
std::string sim_csv_row(const SimResult& result);

Json read_json_file(const std::filesystem::path& path);

}  // namespace capalloc
