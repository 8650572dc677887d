#include "fuzzdss/json_io.hpp"

#include "fuzzdss/dsl.hpp"
#include "fuzzdss/referral.hpp"

namespace fuzzdss {

namespace {

ordered_json antecedents_to_json(const std::vector<Antecedent>& combination) {
  ordered_json out = ordered_json::array();
  for (const auto& a : combination) out.push_back({{"variable", a.variable}, {"term", a.term}});
  return out;
}

ordered_json variable_to_json(const LinguisticVariable& var, const Model* bands_from) {
  ordered_json terms = ordered_json::array();
  for (const auto& term : var.terms) {
    ordered_json t = {{"label", term.label}};
    t.update(membership_to_json(term.mf));
    if (bands_from) {
      for (const auto& band : bands_from->bands) {
        if (band.term == term.label) {
          t["band"] = {{"label", band.label}, {"lower", band.lower}, {"upper", band.upper}};
        }
      }
    }
    terms.push_back(std::move(t));
  }
  return {{"name", var.name},
          {"display_name", var.display_name},
          {"range", {var.universe_min, var.universe_max}},
          {"terms", std::move(terms)}};
}

}  // namespace

ordered_json membership_to_json(const MembershipFunction& mf) {
  ordered_json out = {{"shape", std::string(to_string(mf.shape))}, {"a", mf.a}};
  if (mf.shape == Shape::triangle) out["b"] = mf.b;
  out["c"] = mf.c;
  return out;
}

ordered_json result_to_json(const InferenceResult& result, const Model& model) {
  ordered_json out;
  out["status"] = std::string(to_string(result.status));
  out["crisp_value"] = result.crisp_value ? ordered_json(*result.crisp_value) : ordered_json(nullptr);
  out["category"] = result.category ? ordered_json(*result.category) : ordered_json(nullptr);

  ordered_json fired = ordered_json::array();
  for (const auto& f : result.fired_rules) {
    fired.push_back({{"index", f.rule_index},
                     {"rule_text", f.rule_index < model.rules.size() ? rule_text(model.rules[f.rule_index]) : ""},
                     {"strength", f.strength}});
  }
  out["fired_rules"] = std::move(fired);

  ordered_json memberships = ordered_json::object();
  for (const auto& var : model.inputs) {
    auto degrees = result.memberships.find(var.name);
    if (degrees == result.memberships.end()) continue;
    ordered_json terms = ordered_json::object();
    for (const auto& term : var.terms) {
      auto d = degrees->second.find(term.label);
      if (d != degrees->second.end()) terms[term.label] = d->second;
    }
    memberships[var.name] = std::move(terms);
  }
  out["memberships"] = std::move(memberships);

  ordered_json unruled = ordered_json::array();
  for (const auto& combination : result.unruled_combinations) {
    unruled.push_back(antecedents_to_json(combination));
  }
  out["unruled_combinations"] = std::move(unruled);
  return out;
}

ordered_json model_to_json(const Model& model) {
  ordered_json inputs = ordered_json::array();
  for (const auto& var : model.inputs) inputs.push_back(variable_to_json(var, nullptr));

  ordered_json bands = ordered_json::array();
  for (const auto& band : model.bands) {
    bands.push_back({{"label", band.label}, {"term", band.term}, {"lower", band.lower}, {"upper", band.upper}});
  }

  ordered_json rules = ordered_json::array();
  for (std::size_t i = 0; i < model.rules.size(); ++i) {
    const auto& rule = model.rules[i];
    rules.push_back({{"index", i},
                     {"text", rule_text(rule)},
                     {"antecedents", antecedents_to_json(rule.antecedents)},
                     {"consequent", rule.consequent}});
  }

  return {{"name", model.name},
          {"inputs", std::move(inputs)},
          {"output", variable_to_json(model.output, &model)},
          {"bands", std::move(bands)},
          {"rules", std::move(rules)},
          {"fzm", serialize_model(model)}};
}

ordered_json grid_to_json(const SurfaceGrid& grid) {
  ordered_json fixed = ordered_json::object();
  for (const auto& [name, value] : grid.fixed) fixed[name] = value;

  ordered_json values = ordered_json::array();
  ordered_json categories = ordered_json::array();
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    ordered_json value_row = ordered_json::array();
    ordered_json category_row = ordered_json::array();
    for (std::size_t j = 0; j < grid.values[i].size(); ++j) {
      value_row.push_back(grid.values[i][j] ? ordered_json(*grid.values[i][j]) : ordered_json(nullptr));
      category_row.push_back(grid.categories[i][j] ? ordered_json(*grid.categories[i][j])
                                                   : ordered_json(nullptr));
    }
    values.push_back(std::move(value_row));
    categories.push_back(std::move(category_row));
  }
  return {{"x_variable", grid.x_variable},
          {"y_variable", grid.y_variable},
          {"fixed", std::move(fixed)},
          {"x_points", grid.x_points},
          {"y_points", grid.y_points},
          {"values", std::move(values)},
          {"categories", std::move(categories)}};
}

ordered_json frequency_to_json(const FrequencyReport& report) {
  ordered_json counts = ordered_json::object();
  for (const auto& [label, n] : report.counts) counts[label] = n;
  return {{"counts", std::move(counts)},
          {"no_rule_fired", report.no_rule_fired_count},
          {"total", report.total}};
}

ordered_json diagnostic_to_json(const Diagnostic& diagnostic) {
  ordered_json out = {{"severity", std::string(to_string(diagnostic.severity))},
                      {"kind", std::string(to_string(diagnostic.kind))},
                      {"message", diagnostic.message}};
  if (diagnostic.kind == DiagnosticKind::dead_zone) {
    out["points"] = diagnostic.points;
    ordered_json witness = ordered_json::object();
    if (diagnostic.witness) {
      for (const auto& [name, value] : *diagnostic.witness) witness[name] = value;
    }
    out["witness"] = std::move(witness);
    ordered_json unruled = ordered_json::array();
    for (const auto& combination : diagnostic.unruled) unruled.push_back(antecedents_to_json(combination));
    out["unruled_combinations"] = std::move(unruled);
  }
  return out;
}

ordered_json record_to_json(const ReferralRecord& record) {
  ordered_json counts = ordered_json::object();
  for (const auto& [name, value] : record.counts) counts[name] = value;
  return {{"student_id", record.student_id},
          {"date", format_iso_date(record.recorded_at)},
          {"counts", std::move(counts)}};
}

}  // namespace fuzzdss
