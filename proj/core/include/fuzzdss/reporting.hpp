#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzdss/inference.hpp"
#include "fuzzdss/model.hpp"
#include "fuzzdss/referral.hpp"

namespace fuzzdss {

/// Intervention frequencies over a batch. counts.sum + no_rule_fired_count == total.
struct FrequencyReport {
  std::vector<std::pair<std::string, std::size_t>> counts;
  std::size_t no_rule_fired_count = 0;
  std::size_t total = 0;

  std::size_t count(std::string_view label) const noexcept;
  bool operator==(const FrequencyReport&) const = default;
};

/// Counts ok results under their category. `labels` seeds the table (in that
/// order, zero counts included); categories not in it are appended sorted.
FrequencyReport frequency_report(std::span<const InferenceResult> results,
                                 std::span<const std::string> labels = {});

/// Band labels of `model` in band order.
std::vector<std::string> band_labels(const Model& model);

struct BatchItem {
  ReferralRecord record;
  std::optional<InferenceResult> result;  // empty iff error is set
  std::optional<std::string> error;
};

/// Runs infer on each record's counts for the model's inputs. Extra counts are
/// ignored; missing counts and out-of-universe values become per-item errors.
std::vector<BatchItem> batch_infer(const Model& model, std::span<const ReferralRecord> records);

/// Results of the ok items only, for frequency_report.
std::vector<InferenceResult> successful_results(std::span<const BatchItem> items);

inline constexpr std::size_t default_surface_resolution = 50;

/// infer sampled over a 2-D slice of the input space. values[i][j] and
/// categories[i][j] belong to (x_points[i], y_points[j]); both are empty where
/// no rule fired.
struct SurfaceGrid {
  std::string x_variable;
  std::string y_variable;
  CrispInputs fixed;
  std::vector<double> x_points;
  std::vector<double> y_points;
  std::vector<std::vector<std::optional<double>>> values;
  std::vector<std::vector<std::optional<std::string>>> categories;
};

/// `resolution` evenly spaced points per axis, endpoints included. Throws
/// GridError for unknown or equal axes, an incomplete/out-of-range `fixed`
/// map, or resolution < 2.
SurfaceGrid surface_grid(const Model& model, const std::string& x_variable,
                         const std::string& y_variable, const CrispInputs& fixed,
                         std::size_t resolution = default_surface_resolution);

/// `resolution` evenly spaced points on [lower, upper]; the last is exactly upper.
std::vector<double> uniform_points(double lower, double upper, std::size_t resolution);

/// `x,y,value,category`, x-major; empty fields where no rule fired.
std::string grid_to_csv(const SurfaceGrid& grid);

/// Plain-text table of a frequency report.
std::string frequency_table(const FrequencyReport& report);

}  // namespace fuzzdss
