#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzdss/model.hpp"

namespace fuzzdss {

enum class Severity { error, warning };

enum class DiagnosticKind {
  structural,         // invariant violation; the model cannot be evaluated
  coverage_hole,      // part of a universe where no term is positive
  unreachable_rule,   // an antecedent term is never positive inside its universe
  duplicate_rule,     // same antecedents and consequent as an earlier rule
  conflicting_rules,  // same antecedents as an earlier rule, different consequent
  dead_zone,          // grid points where no rule fires
};

std::string_view to_string(Severity severity) noexcept;
std::string_view to_string(DiagnosticKind kind) noexcept;

struct Diagnostic {
  Severity severity = Severity::warning;
  DiagnosticKind kind = DiagnosticKind::structural;
  std::string message;
  std::optional<CrispInputs> witness;            // dead_zone: a grid point in the zone
  std::vector<std::vector<Antecedent>> unruled;  // dead_zone: active label combos there
  std::size_t points = 0;                        // dead_zone: grid points in the zone
};

struct ValidationOptions {
  std::size_t grid_points_per_axis = 25;
  /// The dead-zone scan shrinks the per-axis count until the grid has at
  /// most this many points.
  std::size_t max_grid_points = 1'000'000;
};

/// Structural errors, term coverage holes, unreachable/duplicate/conflicting
/// rules, and dead zones found by running infer over a uniform grid. Dead
/// zones are grouped by the set of unruled label combinations active there.
std::vector<Diagnostic> validate_model(const Model& model, const ValidationOptions& options = {});

/// Maximal sub-intervals of the universe on which every term has degree 0.
/// Single uncovered points come back as [x, x].
std::vector<std::pair<double, double>> coverage_holes(const LinguisticVariable& var);

bool has_structural_errors(const std::vector<Diagnostic>& diagnostics) noexcept;

}  // namespace fuzzdss
