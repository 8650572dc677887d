#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuzzdss {

using Date = std::chrono::year_month_day;

/// Strict `YYYY-MM-DD`; rejects impossible dates such as 2021-02-30.
std::optional<Date> parse_iso_date(std::string_view text) noexcept;
std::string format_iso_date(const Date& date);

/// One referral event. Counts are keyed by variable name and are not checked
/// against any model until inference time.
struct ReferralRecord {
  std::string student_id;
  Date recorded_at{};
  std::map<std::string, double> counts;

  bool operator==(const ReferralRecord&) const = default;
};

struct RowError {
  std::size_t row = 0;  // 1-based line number in the CSV; the header is row 1
  std::string field;    // column name, empty for whole-row problems
  std::string message;

  bool operator==(const RowError&) const = default;
};

struct CsvIngest {
  std::vector<std::string> variables;  // count columns, in header order
  std::vector<ReferralRecord> records;
  std::vector<std::size_t> record_rows;  // CSV row of each record
  std::vector<RowError> errors;
  std::optional<std::string> header_error;  // set => nothing else was read
};

/// Reads `student_id,date,<var1>,<var2>,...`. Bad rows are reported and
/// skipped; a malformed header aborts with header_error. Blank lines are
/// ignored. Fields may be double-quoted; embedded newlines are not supported.
CsvIngest parse_referral_csv(std::istream& in);

/// Inverse of parse_referral_csv for the given count columns.
std::string write_referral_csv(std::span<const ReferralRecord> records,
                               std::span<const std::string> variables);

/// Splits one CSV line. nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_csv_line(std::string_view line);

/// Quotes a field if it contains a comma, quote or leading/trailing space.
std::string csv_field(std::string_view text);

}  // namespace fuzzdss
