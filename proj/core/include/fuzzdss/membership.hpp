#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fuzzdss {

enum class Shape { shoulder_left, triangle, shoulder_right };

std::string_view to_string(Shape shape) noexcept;
std::optional<Shape> parse_shape(std::string_view text) noexcept;

/// Piecewise-linear fuzzy set. `b` is only meaningful for triangles and is
/// kept at 0 for shoulders so that defaulted equality stays structural.
///
///   shoulder_left(a, c):  1 up to a, falls linearly to 0 at c
///   triangle(a, b, c):    0 at a, 1 at b, 0 at c
///   shoulder_right(a, c): 0 up to a, rises linearly to 1 at c
struct MembershipFunction {
  Shape shape = Shape::triangle;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  /// These throw ModelError when the breakpoints violate the shape invariant.
  static MembershipFunction shoulder_left(double a, double c);
  static MembershipFunction triangle(double a, double b, double c);
  static MembershipFunction shoulder_right(double a, double c);

  /// Describes why (shape, a, b, c) is not a valid membership function, or
  /// nullopt if it is. `b` is ignored for shoulders.
  static std::optional<std::string> check(Shape shape, double a, double b, double c);

  double operator()(double x) const noexcept;

  /// Open interval on which the degree is strictly positive. Shoulders
  /// extend to +/- infinity.
  std::pair<double, double> support() const noexcept;

  /// Kinks of the function, ascending.
  std::vector<double> breakpoints() const;

  /// Points where the function crosses `level`, for 0 < level < 1.
  std::vector<double> level_crossings(double level) const;

  /// Steepest absolute slope of any linear piece.
  double max_slope() const noexcept;

  bool operator==(const MembershipFunction&) const = default;
};

inline double eval_mf(const MembershipFunction& mf, double x) noexcept { return mf(x); }

}  // namespace fuzzdss
