#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzdss/model.hpp"

namespace fuzzdss {

enum class InferenceStatus { ok, no_rule_fired };

std::string_view to_string(InferenceStatus status) noexcept;

struct FiredRule {
  std::size_t rule_index = 0;  // 0-based position in Model::rules
  double strength = 0.0;

  bool operator==(const FiredRule&) const = default;
};

/// Outcome of one pass through fuzzify -> fire -> clip/max -> centroid ->
/// classify. On no_rule_fired, crisp_value and category are empty and
/// unruled_combinations says which label combinations were active but have
/// no rule.
struct InferenceResult {
  InferenceStatus status = InferenceStatus::no_rule_fired;
  std::optional<double> crisp_value;
  std::optional<std::string> category;
  std::vector<FiredRule> fired_rules;  // strength > 0 only, in rule order
  FuzzifiedInputs memberships;
  std::vector<std::vector<Antecedent>> unruled_combinations;

  bool ok() const noexcept { return status == InferenceStatus::ok; }
  bool operator==(const InferenceResult&) const = default;
};

/// min over the rule's antecedent degrees. Throws ModelError when a referenced
/// variable or term is absent from `fuzzified`.
double firing_strength(const Rule& rule, const FuzzifiedInputs& fuzzified);

/// Binds crisp inputs to the model's input variables and fuzzifies each one.
/// Throws BindingError for missing or unknown variables and RangeError for
/// values outside a universe.
FuzzifiedInputs fuzzify_inputs(const Model& model, const CrispInputs& inputs);

/// Full Mamdani pass (min AND, clip implication, max aggregation, centroid).
InferenceResult infer(const Model& model, const CrispInputs& inputs);

}  // namespace fuzzdss
