#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace fuzzdss {

/// Shortest decimal text that reads back to exactly `value` ("3", "5.5",
/// "0.1"). Used everywhere numbers are written out so output is canonical.
std::string format_number(double value);

/// Parses a finite decimal number, requiring the whole token to be consumed.
std::optional<double> parse_number(std::string_view text) noexcept;

}  // namespace fuzzdss
