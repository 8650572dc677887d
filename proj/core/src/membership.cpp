#include "fuzzdss/membership.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuzzdss/error.hpp"
#include "fuzzdss/number_format.hpp"

namespace fuzzdss {

std::string_view to_string(Shape shape) noexcept {
  switch (shape) {
    case Shape::shoulder_left:
      return "shoulder_left";
    case Shape::triangle:
      return "triangle";
    case Shape::shoulder_right:
      return "shoulder_right";
  }
  return "triangle";
}

std::optional<Shape> parse_shape(std::string_view text) noexcept {
  if (text == "shoulder_left") return Shape::shoulder_left;
  if (text == "triangle") return Shape::triangle;
  if (text == "shoulder_right") return Shape::shoulder_right;
  return std::nullopt;
}

std::optional<std::string> MembershipFunction::check(Shape shape, double a, double b, double c) {
  const bool triangle = shape == Shape::triangle;
  if (!std::isfinite(a) || !std::isfinite(c) || (triangle && !std::isfinite(b))) {
    return std::string("breakpoints must be finite");
  }
  if (triangle) {
    if (!(a < b && b < c)) {
      return "triangle breakpoints must satisfy a < b < c (got " + format_number(a) + ", " +
             format_number(b) + ", " + format_number(c) + ")";
    }
  } else if (!(a < c)) {
    return std::string(to_string(shape)) + " breakpoints must satisfy a < c (got " +
           format_number(a) + ", " + format_number(c) + ")";
  }
  return std::nullopt;
}

namespace {

MembershipFunction make_checked(Shape shape, double a, double b, double c) {
  if (auto problem = MembershipFunction::check(shape, a, b, c)) throw ModelError(*problem);
  return MembershipFunction{shape, a, shape == Shape::triangle ? b : 0.0, c};
}

}  // namespace

MembershipFunction MembershipFunction::shoulder_left(double a, double c) {
  return make_checked(Shape::shoulder_left, a, 0.0, c);
}

MembershipFunction MembershipFunction::triangle(double a, double b, double c) {
  return make_checked(Shape::triangle, a, b, c);
}

MembershipFunction MembershipFunction::shoulder_right(double a, double c) {
  return make_checked(Shape::shoulder_right, a, 0.0, c);
}

double MembershipFunction::operator()(double x) const noexcept {
  switch (shape) {
    case Shape::shoulder_left:
      if (x <= a) return 1.0;
      if (x >= c) return 0.0;
      return (c - x) / (c - a);
    case Shape::triangle:
      if (x <= a || x >= c) return 0.0;
      if (x == b) return 1.0;
      if (x < b) return (x - a) / (b - a);
      return (c - x) / (c - b);
    case Shape::shoulder_right:
      if (x <= a) return 0.0;
      if (x >= c) return 1.0;
      return (x - a) / (c - a);
  }
  return 0.0;
}

std::pair<double, double> MembershipFunction::support() const noexcept {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (shape) {
    case Shape::shoulder_left:
      return {-inf, c};
    case Shape::triangle:
      return {a, c};
    case Shape::shoulder_right:
      return {a, inf};
  }
  return {a, c};
}

std::vector<double> MembershipFunction::breakpoints() const {
  if (shape == Shape::triangle) return {a, b, c};
  return {a, c};
}

std::vector<double> MembershipFunction::level_crossings(double level) const {
  if (!(level > 0.0 && level < 1.0)) return {};
  switch (shape) {
    case Shape::shoulder_left:
      return {c - level * (c - a)};
    case Shape::triangle:
      return {a + level * (b - a), c - level * (c - b)};
    case Shape::shoulder_right:
      return {a + level * (c - a)};
  }
  return {};
}

double MembershipFunction::max_slope() const noexcept {
  if (shape == Shape::triangle) return std::max(1.0 / (b - a), 1.0 / (c - b));
  return 1.0 / (c - a);
}

}  // namespace fuzzdss
