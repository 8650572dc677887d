#include "fuzzdss/inference.hpp"

#include <algorithm>

#include "fuzzdss/aggregate.hpp"
#include "fuzzdss/error.hpp"

namespace fuzzdss {

std::string_view to_string(InferenceStatus status) noexcept {
  return status == InferenceStatus::ok ? "ok" : "no_rule_fired";
}

double firing_strength(const Rule& rule, const FuzzifiedInputs& fuzzified) {
  double strength = 1.0;
  for (const auto& ante : rule.antecedents) {
    auto var = fuzzified.find(ante.variable);
    if (var == fuzzified.end()) {
      throw ModelError("no membership degrees for variable '" + ante.variable + "'");
    }
    auto term = var->second.find(ante.term);
    if (term == var->second.end()) {
      throw ModelError("variable '" + ante.variable + "' has no term '" + ante.term + "'");
    }
    strength = std::min(strength, term->second);
  }
  return strength;
}

FuzzifiedInputs fuzzify_inputs(const Model& model, const CrispInputs& inputs) {
  std::vector<std::string> missing;
  for (const auto& var : model.inputs) {
    if (!inputs.count(var.name)) missing.push_back(var.name);
  }
  if (!missing.empty()) throw BindingError(BindingError::Kind::missing_variable, missing);

  std::vector<std::string> unknown;
  for (const auto& [name, value] : inputs) {
    if (!model.find_input(name)) unknown.push_back(name);
  }
  if (!unknown.empty()) throw BindingError(BindingError::Kind::unknown_variable, unknown);

  FuzzifiedInputs fuzzified;
  for (const auto& var : model.inputs) fuzzified.emplace(var.name, fuzzify(var, inputs.at(var.name)));
  return fuzzified;
}

namespace {

bool covers(const Rule& rule, const std::vector<Antecedent>& combination) {
  return std::all_of(rule.antecedents.begin(), rule.antecedents.end(), [&](const Antecedent& a) {
    return std::find(combination.begin(), combination.end(), a) != combination.end();
  });
}

// Enumerating combinations is exponential in the number of inputs; past this
// many the trace is truncated.
constexpr std::size_t max_traced_combinations = 4096;

std::vector<std::vector<Antecedent>> unruled_combinations(const Model& model,
                                                          const FuzzifiedInputs& fuzzified) {
  std::vector<std::vector<Antecedent>> active_terms;
  for (const auto& var : model.inputs) {
    std::vector<Antecedent> active;
    const auto& degrees = fuzzified.at(var.name);
    for (const auto& term : var.terms) {
      if (degrees.at(term.label) > 0.0) active.push_back({var.name, term.label});
    }
    if (active.empty()) return {};
    active_terms.push_back(std::move(active));
  }

  std::vector<std::vector<Antecedent>> unruled;
  std::vector<std::size_t> odometer(active_terms.size(), 0);
  std::vector<Antecedent> combination(active_terms.size());
  for (std::size_t visited = 0; visited < max_traced_combinations; ++visited) {
    for (std::size_t v = 0; v < active_terms.size(); ++v) combination[v] = active_terms[v][odometer[v]];
    const bool ruled = std::any_of(model.rules.begin(), model.rules.end(),
                                   [&](const Rule& rule) { return covers(rule, combination); });
    if (!ruled) unruled.push_back(combination);

    std::size_t v = active_terms.size();
    while (v > 0) {
      --v;
      if (++odometer[v] < active_terms[v].size()) break;
      odometer[v] = 0;
      if (v == 0) return unruled;
    }
    if (active_terms.empty()) break;
  }
  return unruled;
}

}  // namespace

InferenceResult infer(const Model& model, const CrispInputs& inputs) {
  InferenceResult result;
  result.memberships = fuzzify_inputs(model, inputs);

  std::vector<double> strengths(model.rules.size(), 0.0);
  for (std::size_t i = 0; i < model.rules.size(); ++i) {
    strengths[i] = firing_strength(model.rules[i], result.memberships);
    if (strengths[i] > 0.0) result.fired_rules.push_back({i, strengths[i]});
  }
  result.unruled_combinations = unruled_combinations(model, result.memberships);

  const auto agg = aggregate(model, strengths);
  if (auto crisp = defuzzify_centroid(agg)) {
    result.status = InferenceStatus::ok;
    result.crisp_value = *crisp;
    result.category = classify_output(model, *crisp);
  }
  return result;
}

}  // namespace fuzzdss
