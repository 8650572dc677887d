#include "fuzzdss/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "fuzzdss/error.hpp"
#include "fuzzdss/json_io.hpp"

namespace fuzzdss {

namespace {

std::string errno_text(const std::string& what, const std::filesystem::path& path) {
  return what + " '" + path.string() + "': " + std::strerror(errno);
}

// Owns a file descriptor and, once acquired, its flock.
class LockedFile {
 public:
  explicit LockedFile(const std::filesystem::path& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_RDWR | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw StoreError(errno_text("cannot open store", path));
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      const int err = errno;
      ::close(fd_);
      fd_ = -1;
      if (err == EWOULDBLOCK) throw StoreLocked("store '" + path.string() + "' is locked by another writer");
      errno = err;
      throw StoreError(errno_text("cannot lock store", path));
    }
  }
  LockedFile(const LockedFile&) = delete;
  LockedFile& operator=(const LockedFile&) = delete;
  ~LockedFile() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }

  int fd() const noexcept { return fd_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

bool ends_with_newline(int fd, off_t size) {
  if (size == 0) return true;
  char last = '\n';
  return ::pread(fd, &last, 1, size - 1) == 1 && last == '\n';
}

}  // namespace

std::string encode_record(const ReferralRecord& record) { return record_to_json(record).dump(); }

std::optional<ReferralRecord> decode_record(std::string_view line, std::string* error) {
  auto fail = [&](std::string message) -> std::optional<ReferralRecord> {
    if (error) *error = std::move(message);
    return std::nullopt;
  };
  auto json = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
  if (json.is_discarded() || !json.is_object()) return fail("not a JSON object");

  ReferralRecord record;
  auto id = json.find("student_id");
  if (id == json.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) {
    return fail("missing or empty student_id");
  }
  record.student_id = id->get<std::string>();

  auto date = json.find("date");
  if (date == json.end() || !date->is_string()) return fail("missing date");
  auto parsed = parse_iso_date(date->get_ref<const std::string&>());
  if (!parsed) return fail("invalid date '" + date->get<std::string>() + "'");
  record.recorded_at = *parsed;

  auto counts = json.find("counts");
  if (counts == json.end() || !counts->is_object()) return fail("missing counts object");
  for (const auto& [name, value] : counts->items()) {
    if (!value.is_number()) return fail("count '" + name + "' is not a number");
    const double v = value.get<double>();
    if (!std::isfinite(v) || v < 0.0) return fail("count '" + name + "' must be a non-negative number");
    record.counts[name] = v;
  }
  return record;
}

bool RecordFilter::matches(const ReferralRecord& record) const noexcept {
  if (from && record.recorded_at < *from) return false;
  if (to && record.recorded_at > *to) return false;
  if (student_id && record.student_id != *student_id) return false;
  return true;
}

StoreHandle open_store(const std::filesystem::path& path) {
  StoreHandle handle{path, 0};
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::error_code ec;
    if (std::filesystem::exists(path, ec)) throw StoreError("cannot read store '" + path.string() + "'");
    return handle;
  }
  std::string line;
  while (std::getline(in, line)) ++handle.record_count;
  return handle;
}

StoreHandle append_records(const StoreHandle& store, std::span<const ReferralRecord> records) {
  if (records.empty()) return store;

  LockedFile file(store.path);
  struct stat st {};
  if (::fstat(file.fd(), &st) != 0) throw StoreError(errno_text("cannot stat store", store.path));

  std::string buffer;
  // A torn line from a crashed writer must not swallow our first record.
  if (!ends_with_newline(file.fd(), st.st_size)) buffer += '\n';
  for (const auto& record : records) {
    buffer += encode_record(record);
    buffer += '\n';
  }

  std::size_t written = 0;
  while (written < buffer.size()) {
    const ssize_t n = ::write(file.fd(), buffer.data() + written, buffer.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      if (::ftruncate(file.fd(), st.st_size) != 0) { /* nothing more we can do */ }
      errno = err;
      throw StoreError(errno_text("write failed for store", store.path));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(file.fd()) != 0) throw StoreError(errno_text("fsync failed for store", store.path));

  StoreHandle updated = store;
  updated.record_count += records.size();
  return updated;
}

LoadResult load_records(const StoreHandle& store, const RecordFilter& filter) {
  LoadResult result;
  std::ifstream in(store.path, std::ios::binary);
  if (!in) {
    std::error_code ec;
    if (std::filesystem::exists(store.path, ec)) {
      throw StoreError("cannot read store '" + store.path.string() + "'");
    }
    return result;
  }
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string error;
    auto record = decode_record(line, &error);
    if (!record) {
      result.errors.push_back({number, std::move(error)});
      continue;
    }
    if (filter.matches(*record)) result.records.push_back(std::move(*record));
  }
  return result;
}

}  // namespace fuzzdss
