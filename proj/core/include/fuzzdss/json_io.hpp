#pragma once

#include <nlohmann/json.hpp>

#include "fuzzdss/inference.hpp"
#include "fuzzdss/model.hpp"
#include "fuzzdss/reporting.hpp"
#include "fuzzdss/validate.hpp"

namespace fuzzdss {

using ordered_json = nlohmann::ordered_json;

/// {status, crisp_value, category, fired_rules:[{index, rule_text, strength}],
///  memberships, unruled_combinations}. Rule indices are 0-based.
ordered_json result_to_json(const InferenceResult& result, const Model& model);

/// {shape, a, [b,] c}
ordered_json membership_to_json(const MembershipFunction& mf);

/// Variables with terms and breakpoints, bands, rules as text, and the
/// canonical model text under "fzm".
ordered_json model_to_json(const Model& model);

ordered_json grid_to_json(const SurfaceGrid& grid);

/// {counts: {label: n}, no_rule_fired, total}
ordered_json frequency_to_json(const FrequencyReport& report);

ordered_json diagnostic_to_json(const Diagnostic& diagnostic);

ordered_json record_to_json(const ReferralRecord& record);

}  // namespace fuzzdss
