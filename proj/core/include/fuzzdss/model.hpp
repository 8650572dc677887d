#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzdss/membership.hpp"

namespace fuzzdss {

struct Term {
  std::string label;
  MembershipFunction mf;

  bool operator==(const Term&) const = default;
};

/// A named variable over [universe_min, universe_max] with labeled terms.
struct LinguisticVariable {
  std::string name;
  std::string display_name;
  double universe_min = 0.0;
  double universe_max = 1.0;
  std::vector<Term> terms;

  const Term* find_term(std::string_view label) const noexcept;
  bool contains(double x) const noexcept { return x >= universe_min && x <= universe_max; }

  bool operator==(const LinguisticVariable&) const = default;
};

struct Antecedent {
  std::string variable;
  std::string term;

  bool operator==(const Antecedent&) const = default;
  auto operator<=>(const Antecedent&) const = default;
};

/// AND of antecedents implies one output term.
struct Rule {
  std::vector<Antecedent> antecedents;
  std::string consequent;

  bool operator==(const Rule&) const = default;
};

/// Crisp interval of the output universe mapped to an intervention. The
/// first band is closed on both ends; later bands are open on the left, so
/// contiguous bands partition the universe.
struct ClassificationBand {
  std::string label;
  std::string term;  // output term the band was declared on
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const ClassificationBand&) const = default;
};

struct Model {
  std::string name;
  std::vector<LinguisticVariable> inputs;
  LinguisticVariable output;
  std::vector<ClassificationBand> bands;
  std::vector<Rule> rules;

  const LinguisticVariable* find_input(std::string_view name) const noexcept;

  bool operator==(const Model&) const = default;
};

using Degrees = std::map<std::string, double>;            // term label -> degree
using FuzzifiedInputs = std::map<std::string, Degrees>;   // variable -> degrees
using CrispInputs = std::map<std::string, double>;        // variable -> value

/// Degree of every term of `var` at x. Throws RangeError outside the universe.
Degrees fuzzify(const LinguisticVariable& var, double x);

/// Relative distance (as a fraction of the output width) within which a crisp
/// value counts as lying on a band boundary.
inline constexpr double band_tie_tolerance = 1e-9;

/// Band label for a crisp output value. Values within the tie tolerance of a
/// boundary are treated as on it. Throws RangeError outside the output
/// universe and ModelError if the bands leave `value` uncovered.
const std::string& classify_output(const Model& model, double value);

/// Every structural invariant violation in `model`; empty means well formed.
/// Coverage holes and dead zones are not structural; see validate_model.
std::vector<std::string> structural_errors(const Model& model);

/// Violations that involve only the variable itself (universe, breakpoints,
/// duplicate labels, term supports that miss the universe).
std::vector<std::string> variable_errors(const LinguisticVariable& var);

/// Problems with how `bands` tile [lower, upper].
std::vector<std::string> band_errors(const std::vector<ClassificationBand>& bands, double lower,
                                     double upper);

}  // namespace fuzzdss
