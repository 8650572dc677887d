#include "fuzzdss/validate.hpp"

#include <algorithm>
#include <cmath>

#include "fuzzdss/inference.hpp"
#include "fuzzdss/number_format.hpp"

namespace fuzzdss {

std::string_view to_string(Severity severity) noexcept {
  return severity == Severity::error ? "error" : "warning";
}

std::string_view to_string(DiagnosticKind kind) noexcept {
  switch (kind) {
    case DiagnosticKind::structural:
      return "structural";
    case DiagnosticKind::coverage_hole:
      return "coverage_hole";
    case DiagnosticKind::unreachable_rule:
      return "unreachable_rule";
    case DiagnosticKind::duplicate_rule:
      return "duplicate_rule";
    case DiagnosticKind::conflicting_rules:
      return "conflicting_rules";
    case DiagnosticKind::dead_zone:
      return "dead_zone";
  }
  return "structural";
}

bool has_structural_errors(const std::vector<Diagnostic>& diagnostics) noexcept {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
    return d.kind == DiagnosticKind::structural;
  });
}

std::vector<std::pair<double, double>> coverage_holes(const LinguisticVariable& var) {
  const double lo = var.universe_min;
  const double hi = var.universe_max;

  std::vector<std::pair<double, double>> supports;
  for (const auto& term : var.terms) supports.push_back(term.mf.support());
  std::sort(supports.begin(), supports.end());

  // Union of open intervals; touching intervals stay separate because the
  // shared endpoint is uncovered.
  std::vector<std::pair<double, double>> merged;
  for (const auto& s : supports) {
    if (!merged.empty() && s.first < merged.back().second) {
      merged.back().second = std::max(merged.back().second, s.second);
    } else {
      merged.push_back(s);
    }
  }

  std::vector<std::pair<double, double>> holes;
  auto add_hole = [&](double from, double to) {
    from = std::max(from, lo);
    to = std::min(to, hi);
    if (from <= to) holes.emplace_back(from, to);
  };
  if (merged.empty()) {
    add_hole(lo, hi);
    return holes;
  }
  if (merged.front().first >= lo) add_hole(lo, merged.front().first);
  for (std::size_t i = 1; i < merged.size(); ++i) add_hole(merged[i - 1].second, merged[i].first);
  if (merged.back().second <= hi) add_hole(merged.back().second, hi);
  return holes;
}

namespace {

std::string describe_combination(const std::vector<Antecedent>& combination) {
  std::string text;
  for (std::size_t i = 0; i < combination.size(); ++i) {
    if (i) text += " and ";
    text += combination[i].variable + " is " + combination[i].term;
  }
  return text;
}

std::string describe_point(const CrispInputs& point) {
  std::string text;
  for (const auto& [name, value] : point) {
    if (!text.empty()) text += ", ";
    text += name + "=" + format_number(value);
  }
  return text;
}

bool same_antecedents(const Rule& a, const Rule& b) {
  auto left = a.antecedents;
  auto right = b.antecedents;
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  return left == right;
}

void check_rules(const Model& model, std::vector<Diagnostic>& out) {
  for (std::size_t i = 0; i < model.rules.size(); ++i) {
    const auto& rule = model.rules[i];
    for (const auto& ante : rule.antecedents) {
      const auto* var = model.find_input(ante.variable);
      const auto* term = var->find_term(ante.term);
      auto [lo, hi] = term->mf.support();
      if (!(lo < var->universe_max && hi > var->universe_min)) {
        out.push_back({Severity::warning, DiagnosticKind::unreachable_rule,
                       "rule " + std::to_string(i + 1) + " can never fire: '" + ante.variable +
                           " is " + ante.term + "' is zero across the whole universe",
                       std::nullopt, {}, 0});
      }
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!same_antecedents(model.rules[j], rule)) continue;
      const bool duplicate = model.rules[j].consequent == rule.consequent;
      out.push_back({Severity::warning,
                     duplicate ? DiagnosticKind::duplicate_rule : DiagnosticKind::conflicting_rules,
                     "rule " + std::to_string(i + 1) +
                         (duplicate ? " repeats rule " : " has the same conditions as rule ") +
                         std::to_string(j + 1) +
                         (duplicate ? "" : " but concludes '" + rule.consequent + "'"),
                     std::nullopt, {}, 0});
      break;
    }
  }
}

struct DeadZone {
  std::vector<std::vector<Antecedent>> unruled;
  CrispInputs witness;
  std::size_t points = 0;
};

void scan_dead_zones(const Model& model, const ValidationOptions& options,
                     std::vector<Diagnostic>& out) {
  const std::size_t dims = model.inputs.size();
  std::size_t per_axis = std::max<std::size_t>(options.grid_points_per_axis, 2);
  auto total_for = [dims](std::size_t k) {
    double total = std::pow(static_cast<double>(k), static_cast<double>(dims));
    return total;
  };
  while (per_axis > 2 && total_for(per_axis) > static_cast<double>(options.max_grid_points)) {
    --per_axis;
  }

  std::vector<DeadZone> zones;
  std::size_t scanned = 0;
  std::vector<std::size_t> index(dims, 0);
  CrispInputs point;
  while (true) {
    for (std::size_t d = 0; d < dims; ++d) {
      const auto& var = model.inputs[d];
      const double width = var.universe_max - var.universe_min;
      point[var.name] = index[d] + 1 == per_axis
                            ? var.universe_max
                            : var.universe_min + static_cast<double>(index[d]) * width /
                                                     static_cast<double>(per_axis - 1);
    }
    ++scanned;
    auto result = infer(model, point);
    if (!result.ok()) {
      auto zone = std::find_if(zones.begin(), zones.end(), [&](const DeadZone& z) {
        return z.unruled == result.unruled_combinations;
      });
      if (zone == zones.end()) {
        zones.push_back({result.unruled_combinations, point, 0});
        zone = zones.end() - 1;
      }
      ++zone->points;
    }

    std::size_t d = dims;
    bool done = true;
    while (d > 0) {
      --d;
      if (++index[d] < per_axis) {
        done = false;
        break;
      }
      index[d] = 0;
    }
    if (done) break;
  }

  for (auto& zone : zones) {
    std::string message = "no rule fires at " + std::to_string(zone.points) + " of " +
                          std::to_string(scanned) + " grid points ";
    if (zone.unruled.empty()) {
      message += "where some input has no positive term";
    } else {
      message += "where only unruled combinations are active: ";
      for (std::size_t i = 0; i < zone.unruled.size(); ++i) {
        if (i) message += "; ";
        message += "(" + describe_combination(zone.unruled[i]) + ")";
      }
    }
    message += "; e.g. at " + describe_point(zone.witness);
    out.push_back({Severity::warning, DiagnosticKind::dead_zone, std::move(message),
                   std::move(zone.witness), std::move(zone.unruled), zone.points});
  }
}

}  // namespace

std::vector<Diagnostic> validate_model(const Model& model, const ValidationOptions& options) {
  std::vector<Diagnostic> out;
  for (auto& message : structural_errors(model)) {
    out.push_back({Severity::error, DiagnosticKind::structural, std::move(message), std::nullopt, {}, 0});
  }
  if (!out.empty()) return out;

  auto report_holes = [&](const LinguisticVariable& var) {
    for (auto [from, to] : coverage_holes(var)) {
      std::string where = from == to ? "at " + format_number(from)
                                     : "on [" + format_number(from) + ", " + format_number(to) + "]";
      out.push_back({Severity::warning, DiagnosticKind::coverage_hole,
                     "no term of '" + var.name + "' is positive " + where, std::nullopt, {}, 0});
    }
  };
  for (const auto& var : model.inputs) report_holes(var);
  report_holes(model.output);

  check_rules(model, out);
  scan_dead_zones(model, options, out);
  return out;
}

}  // namespace fuzzdss
