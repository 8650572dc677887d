#include "fuzzdss/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fuzzdss/error.hpp"
#include "fuzzdss/number_format.hpp"

namespace fuzzdss {

const Term* LinguisticVariable::find_term(std::string_view label) const noexcept {
  for (const auto& term : terms) {
    if (term.label == label) return &term;
  }
  return nullptr;
}

const LinguisticVariable* Model::find_input(std::string_view name) const noexcept {
  for (const auto& var : inputs) {
    if (var.name == name) return &var;
  }
  return nullptr;
}

Degrees fuzzify(const LinguisticVariable& var, double x) {
  if (!var.contains(x)) throw RangeError(var.name, x, var.universe_min, var.universe_max);
  Degrees degrees;
  for (const auto& term : var.terms) degrees.emplace(term.label, term.mf(x));
  return degrees;
}

const std::string& classify_output(const Model& model, double value) {
  const auto& out = model.output;
  if (!out.contains(value)) throw RangeError(out.name, value, out.universe_min, out.universe_max);
  // Centroids that are exactly on a boundary come out a few ulps off it;
  // snap them so the closed upper edge wins.
  const double tie = band_tie_tolerance * (out.universe_max - out.universe_min);
  for (std::size_t i = 0; i < model.bands.size(); ++i) {
    const auto& band = model.bands[i];
    const bool above_lower = i == 0 ? value >= band.lower - tie : value > band.lower + tie;
    if (above_lower && value <= band.upper + tie) return band.label;
  }
  throw ModelError("no classification band contains " + format_number(value));
}

std::vector<std::string> variable_errors(const LinguisticVariable& var) {
  std::vector<std::string> errors;
  const std::string where = "variable '" + var.name + "'";
  if (!std::isfinite(var.universe_min) || !std::isfinite(var.universe_max) ||
      !(var.universe_min < var.universe_max)) {
    errors.push_back(where + ": universe must satisfy min < max (got " +
                     format_number(var.universe_min) + ", " + format_number(var.universe_max) + ")");
  }
  if (var.terms.empty()) errors.push_back(where + " has no terms");
  std::set<std::string> seen;
  for (const auto& term : var.terms) {
    if (!seen.insert(term.label).second) {
      errors.push_back(where + ": duplicate term '" + term.label + "'");
    }
    if (auto problem = MembershipFunction::check(term.mf.shape, term.mf.a, term.mf.b, term.mf.c)) {
      errors.push_back(where + ", term '" + term.label + "': " + *problem);
      continue;
    }
    // Support is open, universe closed; touching the edge is allowed here and
    // surfaces later as an unreachable term.
    auto [lo, hi] = term.mf.support();
    if (hi < var.universe_min || lo > var.universe_max) {
      errors.push_back(where + ", term '" + term.label + "': support does not reach the universe");
    }
  }
  return errors;
}

std::vector<std::string> band_errors(const std::vector<ClassificationBand>& bands, double lower,
                                     double upper) {
  std::vector<std::string> errors;
  if (bands.empty()) {
    errors.emplace_back("output has no classification bands");
    return errors;
  }
  for (const auto& band : bands) {
    if (!(band.lower < band.upper)) {
      errors.push_back("band '" + band.label + "' must satisfy lower < upper");
    }
  }
  if (bands.front().lower != lower) {
    errors.push_back("first band '" + bands.front().label + "' starts at " +
                     format_number(bands.front().lower) + ", not at the universe minimum " +
                     format_number(lower));
  }
  if (bands.back().upper != upper) {
    errors.push_back("last band '" + bands.back().label + "' ends at " +
                     format_number(bands.back().upper) + ", not at the universe maximum " +
                     format_number(upper));
  }
  for (std::size_t i = 1; i < bands.size(); ++i) {
    const auto& prev = bands[i - 1];
    const auto& cur = bands[i];
    if (cur.lower > prev.upper) {
      errors.push_back("gap between bands '" + prev.label + "' and '" + cur.label + "' (" +
                       format_number(prev.upper) + " to " + format_number(cur.lower) + ")");
    } else if (cur.lower < prev.upper) {
      errors.push_back("bands '" + prev.label + "' and '" + cur.label + "' overlap");
    }
  }
  std::set<std::string> labels;
  for (const auto& band : bands) {
    if (!labels.insert(band.label).second) {
      errors.push_back("duplicate band label '" + band.label + "'");
    }
  }
  return errors;
}

std::vector<std::string> structural_errors(const Model& model) {
  std::vector<std::string> errors;
  if (model.inputs.empty()) errors.emplace_back("model has no input variables");
  if (model.rules.empty()) errors.emplace_back("model has no rules");

  std::set<std::string> names;
  for (const auto& var : model.inputs) {
    if (!names.insert(var.name).second) {
      errors.push_back("duplicate input variable '" + var.name + "'");
    }
    auto more = variable_errors(var);
    errors.insert(errors.end(), more.begin(), more.end());
  }
  if (names.count(model.output.name)) {
    errors.push_back("output '" + model.output.name + "' reuses an input variable name");
  }
  auto more = variable_errors(model.output);
  errors.insert(errors.end(), more.begin(), more.end());

  more = band_errors(model.bands, model.output.universe_min, model.output.universe_max);
  errors.insert(errors.end(), more.begin(), more.end());
  for (const auto& band : model.bands) {
    if (!model.output.find_term(band.term)) {
      errors.push_back("band '" + band.label + "' refers to unknown output term '" + band.term + "'");
    }
  }

  for (std::size_t i = 0; i < model.rules.size(); ++i) {
    const auto& rule = model.rules[i];
    const std::string where = "rule " + std::to_string(i + 1);
    std::set<std::string> used;
    for (const auto& ante : rule.antecedents) {
      const auto* var = model.find_input(ante.variable);
      if (!var) {
        errors.push_back(where + ": unknown input variable '" + ante.variable + "'");
        continue;
      }
      if (!used.insert(ante.variable).second) {
        errors.push_back(where + ": variable '" + ante.variable + "' appears more than once");
      }
      if (!var->find_term(ante.term)) {
        errors.push_back(where + ": unknown term '" + ante.term + "' for variable '" +
                         ante.variable + "'");
      }
    }
    for (const auto& var : model.inputs) {
      if (!used.count(var.name)) {
        errors.push_back(where + ": no condition on input variable '" + var.name + "'");
      }
    }
    if (!model.output.find_term(rule.consequent)) {
      errors.push_back(where + ": unknown output term '" + rule.consequent + "'");
    }
  }
  return errors;
}

}  // namespace fuzzdss
