#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzdss/referral.hpp"

namespace fuzzdss {

/// Append-only referral store: one JSON object per line with keys
/// `student_id`, `date` and `counts`.
struct StoreHandle {
  std::filesystem::path path;
  std::size_t record_count = 0;
};

/// Opens (without creating) the store at `path`; a missing file holds zero
/// records.
StoreHandle open_store(const std::filesystem::path& path);

/// Appends all of `records` in a single write under an exclusive advisory
/// lock. Either every record lands or the file is left at its previous
/// length. Throws StoreLocked if another writer holds the lock and
/// StoreError on I/O failure.
StoreHandle append_records(const StoreHandle& store, std::span<const ReferralRecord> records);

struct RecordFilter {
  std::optional<Date> from;  // inclusive
  std::optional<Date> to;    // inclusive
  std::optional<std::string> student_id;

  bool matches(const ReferralRecord& record) const noexcept;
};

struct StoreLineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct LoadResult {
  std::vector<ReferralRecord> records;  // append order
  std::vector<StoreLineError> errors;
};

/// Reads matching records. Corrupt lines are reported and skipped; the
/// remaining records are still returned. Throws StoreError if the file exists
/// but cannot be read.
LoadResult load_records(const StoreHandle& store, const RecordFilter& filter = {});

/// One store line (without the newline) and its inverse.
std::string encode_record(const ReferralRecord& record);
std::optional<ReferralRecord> decode_record(std::string_view line, std::string* error = nullptr);

}  // namespace fuzzdss
