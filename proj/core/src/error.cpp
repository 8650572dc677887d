#include "fuzzdss/error.hpp"

#include "fuzzdss/number_format.hpp"

namespace fuzzdss {

namespace {

std::string describe_range(const std::string& variable, double value, double lower, double upper) {
  return "value " + format_number(value) + " for '" + variable + "' is outside its universe [" +
         format_number(lower) + ", " + format_number(upper) + "]";
}

std::string describe_binding(BindingError::Kind kind, const std::vector<std::string>& variables) {
  std::string text = kind == BindingError::Kind::missing_variable ? "missing input" : "unknown input";
  text += variables.size() == 1 ? " variable: " : " variables: ";
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (i) text += ", ";
    text += variables[i];
  }
  return text;
}

}  // namespace

RangeError::RangeError(std::string variable, double value, double lower, double upper)
    : Error(describe_range(variable, value, lower, upper)),
      variable_(std::move(variable)),
      value_(value),
      lower_(lower),
      upper_(upper) {}

BindingError::BindingError(Kind kind, std::vector<std::string> variables)
    : Error(describe_binding(kind, variables)), kind_(kind), variables_(std::move(variables)) {}

}  // namespace fuzzdss
