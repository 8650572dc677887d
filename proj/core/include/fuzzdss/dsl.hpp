#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fuzzdss/model.hpp"

namespace fuzzdss {

/// Text of a `.fzm` model file and where it came from (a path or "<builtin>").
struct ModelSource {
  std::string text;
  std::string origin = "<input>";
};

struct ParseError {
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based byte column
  std::string message;
  std::string snippet;     // the offending line, without its newline

  bool operator==(const ParseError&) const = default;
};

struct ParseResult {
  std::optional<Model> model;
  std::vector<ParseError> errors;

  bool ok() const noexcept { return model.has_value(); }
};

/// Parses the line-oriented model language:
///
///   model "<name>"
///   input <id> "<display name>" range <min> <max>
///     term <id> shoulder_left <a> <c>
///     term <id> triangle <a> <b> <c>
///     term <id> shoulder_right <a> <c>
///   output <id> "<display name>" range <min> <max>
///     term <id> <shape> <breakpoints...> band <lower> <upper> ["<label>"]
///   rule if <var> is <term> and <var> is <term> ... then <output term>
///
/// `#` starts a comment. Indentation is not significant; a term belongs to
/// the most recent input/output. Errors are collected across the whole file
/// rather than stopping at the first one. Never throws (except bad_alloc).
ParseResult parse_model(const ModelSource& source);

/// Canonical text for `model`. Deterministic; parse_model of the result is
/// structurally equal to `model`.
std::string serialize_model(const Model& model);

/// "if pap is low and tardiness is low then workshop_counseling"
std::string rule_text(const Rule& rule);

/// "<origin>:<line>:<column>: <message>" followed by the snippet and a caret.
std::string format_parse_error(const ParseError& error, const std::string& origin);

}  // namespace fuzzdss
