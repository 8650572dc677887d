#include "fuzzdss/reporting.hpp"

#include <algorithm>
#include <map>

#include "fuzzdss/error.hpp"
#include "fuzzdss/number_format.hpp"

namespace fuzzdss {

std::size_t FrequencyReport::count(std::string_view label) const noexcept {
  for (const auto& [name, n] : counts) {
    if (name == label) return n;
  }
  return 0;
}

FrequencyReport frequency_report(std::span<const InferenceResult> results,
                                 std::span<const std::string> labels) {
  FrequencyReport report;
  std::map<std::string, std::size_t> tally;
  for (const auto& result : results) {
    ++report.total;
    if (result.ok() && result.category) {
      ++tally[*result.category];
    } else {
      ++report.no_rule_fired_count;
    }
  }
  for (const auto& label : labels) {
    const bool listed = std::any_of(report.counts.begin(), report.counts.end(),
                                    [&](const auto& entry) { return entry.first == label; });
    if (listed) continue;
    auto it = tally.find(label);
    report.counts.emplace_back(label, it == tally.end() ? 0 : it->second);
    if (it != tally.end()) tally.erase(it);
  }
  for (auto& [label, n] : tally) report.counts.emplace_back(label, n);
  return report;
}

std::vector<std::string> band_labels(const Model& model) {
  std::vector<std::string> labels;
  for (const auto& band : model.bands) labels.push_back(band.label);
  return labels;
}

std::vector<BatchItem> batch_infer(const Model& model, std::span<const ReferralRecord> records) {
  std::vector<BatchItem> items;
  items.reserve(records.size());
  for (const auto& record : records) {
    BatchItem item{record, std::nullopt, std::nullopt};
    CrispInputs inputs;
    std::vector<std::string> missing;
    for (const auto& var : model.inputs) {
      auto it = record.counts.find(var.name);
      if (it == record.counts.end()) {
        missing.push_back(var.name);
      } else {
        inputs[var.name] = it->second;
      }
    }
    try {
      if (!missing.empty()) throw BindingError(BindingError::Kind::missing_variable, missing);
      item.result = infer(model, inputs);
    } catch (const Error& e) {
      item.error = e.what();
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<InferenceResult> successful_results(std::span<const BatchItem> items) {
  std::vector<InferenceResult> results;
  for (const auto& item : items) {
    if (item.result) results.push_back(*item.result);
  }
  return results;
}

std::vector<double> uniform_points(double lower, double upper, std::size_t resolution) {
  std::vector<double> points;
  points.reserve(resolution);
  const double width = upper - lower;
  for (std::size_t i = 0; i < resolution; ++i) {
    if (i + 1 == resolution) {
      points.push_back(upper);
    } else {
      points.push_back(lower + static_cast<double>(i) * width / static_cast<double>(resolution - 1));
    }
  }
  return points;
}

SurfaceGrid surface_grid(const Model& model, const std::string& x_variable,
                         const std::string& y_variable, const CrispInputs& fixed,
                         std::size_t resolution) {
  if (resolution < 2) throw GridError("resolution must be at least 2");
  const auto* x_var = model.find_input(x_variable);
  const auto* y_var = model.find_input(y_variable);
  if (!x_var) throw GridError("unknown input variable '" + x_variable + "'");
  if (!y_var) throw GridError("unknown input variable '" + y_variable + "'");
  if (x_variable == y_variable) throw GridError("x and y must be different variables");

  for (const auto& var : model.inputs) {
    if (var.name == x_variable || var.name == y_variable) continue;
    auto it = fixed.find(var.name);
    if (it == fixed.end()) throw GridError("no fixed value for input '" + var.name + "'");
    if (!var.contains(it->second)) {
      throw GridError("fixed value " + format_number(it->second) + " for '" + var.name +
                      "' is outside [" + format_number(var.universe_min) + ", " +
                      format_number(var.universe_max) + "]");
    }
  }
  for (const auto& [name, value] : fixed) {
    if (name == x_variable || name == y_variable || !model.find_input(name)) {
      throw GridError("'" + name + "' cannot be fixed (it is an axis or not an input)");
    }
  }

  SurfaceGrid grid;
  grid.x_variable = x_variable;
  grid.y_variable = y_variable;
  grid.fixed = fixed;
  grid.x_points = uniform_points(x_var->universe_min, x_var->universe_max, resolution);
  grid.y_points = uniform_points(y_var->universe_min, y_var->universe_max, resolution);
  grid.values.assign(resolution, std::vector<std::optional<double>>(resolution));
  grid.categories.assign(resolution, std::vector<std::optional<std::string>>(resolution));

  CrispInputs point = fixed;
  for (std::size_t i = 0; i < resolution; ++i) {
    point[x_variable] = grid.x_points[i];
    for (std::size_t j = 0; j < resolution; ++j) {
      point[y_variable] = grid.y_points[j];
      auto result = infer(model, point);
      if (result.ok()) {
        grid.values[i][j] = result.crisp_value;
        grid.categories[i][j] = result.category;
      }
    }
  }
  return grid;
}

std::string grid_to_csv(const SurfaceGrid& grid) {
  std::string out = "x,y,value,category\n";
  for (std::size_t i = 0; i < grid.x_points.size(); ++i) {
    for (std::size_t j = 0; j < grid.y_points.size(); ++j) {
      out += format_number(grid.x_points[i]);
      out += ',';
      out += format_number(grid.y_points[j]);
      out += ',';
      if (grid.values[i][j]) out += format_number(*grid.values[i][j]);
      out += ',';
      if (grid.categories[i][j]) out += csv_field(*grid.categories[i][j]);
      out += '\n';
    }
  }
  return out;
}

std::string frequency_table(const FrequencyReport& report) {
  std::size_t width = std::string_view("Intervention").size();
  for (const auto& [label, n] : report.counts) width = std::max(width, label.size());
  width = std::max(width, std::string_view("(no rule fired)").size());

  auto row = [&](std::string_view label, std::string count) {
    std::string line(label);
    line.append(width - label.size() + 2, ' ');
    line += count;
    line += '\n';
    return line;
  };
  std::string out = row("Intervention", "Frequency");
  out += std::string(width + 2 + 9, '-') + "\n";
  for (const auto& [label, n] : report.counts) out += row(label, std::to_string(n));
  if (report.no_rule_fired_count > 0) out += row("(no rule fired)", std::to_string(report.no_rule_fired_count));
  out += row("Total", std::to_string(report.total));
  return out;
}

}  // namespace fuzzdss
