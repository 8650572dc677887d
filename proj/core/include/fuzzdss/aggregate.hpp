#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fuzzdss/membership.hpp"
#include "fuzzdss/model.hpp"

namespace fuzzdss {

struct Vertex {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vertex&) const = default;
};

/// Continuous piecewise-linear function over the output universe, stored as
/// its vertices (ascending x, first at the lower bound, last at the upper).
class AggregatedOutput {
 public:
  /// The zero function over [lower, upper].
  AggregatedOutput(double lower, double upper);
  explicit AggregatedOutput(std::vector<Vertex> vertices);

  double operator()(double x) const noexcept;

  std::span<const Vertex> vertices() const noexcept { return vertices_; }
  double lower() const noexcept { return vertices_.front().x; }
  double upper() const noexcept { return vertices_.back().x; }

  /// Exact integral of the function.
  double area() const noexcept;

  /// Smallest closed interval outside which the function is zero, or nullopt
  /// for the zero function.
  std::optional<std::pair<double, double>> support() const noexcept;

 private:
  std::vector<Vertex> vertices_;
};

/// One consequent fuzzy set clipped at a firing level.
struct ClippedSet {
  MembershipFunction mf;
  double level = 0.0;
};

/// Pointwise max of min(level, mf(x)) over [lower, upper], with every kink
/// (breakpoints, clip points, pairwise crossings) as an explicit vertex.
AggregatedOutput aggregate_clipped(double lower, double upper, std::span<const ClippedSet> sets);

/// Clip each rule's consequent at its strength and take the max. Throws
/// ModelError if `strengths` does not match the rule count or a consequent is
/// unknown.
AggregatedOutput aggregate(const Model& model, std::span<const double> strengths);

/// Center of mass, integrated in closed form segment by segment. nullopt when
/// the area is zero, which callers report as no_rule_fired.
std::optional<double> defuzzify_centroid(const AggregatedOutput& agg) noexcept;

}  // namespace fuzzdss
