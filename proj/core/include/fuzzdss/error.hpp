#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fuzzdss {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A crisp value fell outside the universe of the variable it was bound to.
class RangeError : public Error {
 public:
  RangeError(std::string variable, double value, double lower, double upper);

  const std::string& variable() const noexcept { return variable_; }
  double value() const noexcept { return value_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  std::string variable_;
  double value_;
  double lower_;
  double upper_;
};

/// The model references something that does not exist, or a value violates
/// a structural invariant (inverted breakpoints, empty universe, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Crisp inputs do not line up with the model's input variables.
class BindingError : public Error {
 public:
  enum class Kind { missing_variable, unknown_variable };

  BindingError(Kind kind, std::vector<std::string> variables);

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::string>& variables() const noexcept { return variables_; }

 private:
  Kind kind_;
  std::vector<std::string> variables_;
};

/// Bad arguments to surface_grid.
class GridError : public Error {
 public:
  using Error::Error;
};

class StoreError : public Error {
 public:
  using Error::Error;
};

/// Another writer holds the store's advisory lock.
class StoreLocked : public StoreError {
 public:
  using StoreError::StoreError;
};

}  // namespace fuzzdss
