#include "fuzzdss/referral.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <set>

#include "fuzzdss/number_format.hpp"
#include "utf8.hpp"

namespace fuzzdss {

std::optional<Date> parse_iso_date(std::string_view text) noexcept {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto digits = [&](std::size_t from, std::size_t count) -> std::optional<int> {
    int value = 0;
    for (std::size_t i = from; i < from + count; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      value = value * 10 + (text[i] - '0');
    }
    return value;
  };
  auto y = digits(0, 4);
  auto m = digits(5, 2);
  auto d = digits(8, 2);
  if (!y || !m || !d) return std::nullopt;
  Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
            std::chrono::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_iso_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::optional<std::vector<std::string>> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  std::size_t i = 0;
  while (true) {
    field.clear();
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        field += line[i++];
      }
      if (!closed) return std::nullopt;
      // Anything between the closing quote and the next comma is kept verbatim.
      while (i < line.size() && line[i] != ',') field += line[i++];
    } else {
      while (i < line.size() && line[i] != ',') field += line[i++];
    }
    fields.push_back(field);
    if (i >= line.size()) break;
    ++i;  // comma
  }
  return fields;
}

std::string csv_field(std::string_view text) {
  const bool needs_quotes = text.find_first_of(",\"\r\n") != std::string_view::npos ||
                            (!text.empty() && (text.front() == ' ' || text.back() == ' '));
  if (!needs_quotes) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string strip_bom(std::string line) {
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  return line;
}

}  // namespace

CsvIngest parse_referral_csv(std::istream& in) {
  CsvIngest out;
  std::string line;
  std::size_t row = 0;

  std::optional<std::vector<std::string>> header;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (row == 1) line = strip_bom(std::move(line));
    if (trim(line).empty()) continue;
    header = split_csv_line(line);
    break;
  }
  if (!header) {
    out.header_error = row == 0 ? "input is empty; expected a header row"
                                : "malformed header on row " + std::to_string(row);
    return out;
  }
  for (auto& name : *header) name = std::string(trim(name));
  if (header->size() < 3 || (*header)[0] != "student_id" || (*header)[1] != "date") {
    out.header_error = "header must be student_id,date,<variable>,... (row " + std::to_string(row) + ")";
    return out;
  }
  std::set<std::string> seen;
  for (std::size_t i = 2; i < header->size(); ++i) {
    const auto& name = (*header)[i];
    if (name.empty() || detail::invalid_utf8_offset(name) != std::string_view::npos) {
      out.header_error = "header column " + std::to_string(i + 1) + " is empty or not valid UTF-8";
      return out;
    }
    if (name == "student_id" || name == "date" || !seen.insert(name).second) {
      out.header_error = "duplicate header column '" + name + "'";
      return out;
    }
    out.variables.push_back(name);
  }

  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (!fields) {
      out.errors.push_back({row, "", "unterminated quoted field"});
      continue;
    }
    if (fields->size() != header->size()) {
      out.errors.push_back({row, "",
                            (fields->size() < header->size() ? "missing fields: expected " : "too many fields: expected ") +
                                std::to_string(header->size()) + ", got " + std::to_string(fields->size())});
      continue;
    }

    ReferralRecord record;
    bool ok = true;
    auto fail = [&](const std::string& field, std::string message) {
      out.errors.push_back({row, field, std::move(message)});
      ok = false;
    };

    record.student_id = std::string(trim((*fields)[0]));
    if (record.student_id.empty()) {
      fail("student_id", "student_id is empty");
    } else if (detail::invalid_utf8_offset(record.student_id) != std::string_view::npos) {
      fail("student_id", "student_id is not valid UTF-8");
    }

    const auto date_text = trim((*fields)[1]);
    if (auto date = parse_iso_date(date_text)) {
      record.recorded_at = *date;
    } else {
      fail("date", "invalid date '" + std::string(date_text) + "' (expected YYYY-MM-DD)");
    }

    for (std::size_t i = 0; i < out.variables.size(); ++i) {
      const auto& name = out.variables[i];
      const auto text = trim((*fields)[i + 2]);
      if (text.empty()) {
        fail(name, "missing value for '" + name + "'");
        continue;
      }
      auto value = parse_number(text);
      if (!value) {
        fail(name, "'" + std::string(text) + "' is not a number");
      } else if (*value < 0.0) {
        fail(name, "negative count " + std::string(text) + " for '" + name + "'");
      } else {
        record.counts[name] = *value;
      }
    }
    if (ok) {
      out.records.push_back(std::move(record));
      out.record_rows.push_back(row);
    }
  }
  return out;
}

std::string write_referral_csv(std::span<const ReferralRecord> records,
                               std::span<const std::string> variables) {
  std::string out = "student_id,date";
  for (const auto& name : variables) out += "," + csv_field(name);
  out += '\n';
  for (const auto& record : records) {
    out += csv_field(record.student_id);
    out += ',';
    out += format_iso_date(record.recorded_at);
    for (const auto& name : variables) {
      out += ',';
      auto it = record.counts.find(name);
      if (it != record.counts.end()) out += format_number(it->second);
    }
    out += '\n';
  }
  return out;
}

}  // namespace fuzzdss
