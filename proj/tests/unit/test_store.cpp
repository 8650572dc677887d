#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fuzzdss/error.hpp"
#include "fuzzdss/store.hpp"
#include "support/generators.hpp"

using namespace fuzzdss;
using namespace std::chrono;
namespace fs = std::filesystem;

namespace {

struct TempStore {
  fs::path path;
  TempStore() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("fuzzdss-store-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".jsonl");
    fs::remove(path);
  }
  ~TempStore() { fs::remove(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ReferralRecord rec(std::string id, int y, unsigned m, unsigned d, double pap) {
  return {std::move(id), Date{year{y}, month{m}, day{d}}, {{"pap", pap}, {"tardiness", 1}, {"absenteeism", 2}}};
}

}  // namespace

TEST_CASE("missing store holds zero records") {
  TempStore tmp;
  auto store = open_store(tmp.path);
  CHECK(store.record_count == 0);
  CHECK(load_records(store).records.empty());
  CHECK_FALSE(fs::exists(tmp.path));
}

TEST_CASE("append then load") {
  TempStore tmp;
  auto store = open_store(tmp.path);
  const std::vector<ReferralRecord> batch{rec("S1", 2024, 1, 5, 1), rec("S2", 2024, 2, 5, 4),
                                          rec("S1", 2024, 3, 5, 6.5)};
  store = append_records(store, batch);
  CHECK(store.record_count == 3);
  CHECK(open_store(tmp.path).record_count == 3);
  auto loaded = load_records(store);
  CHECK(loaded.errors.empty());
  CHECK(loaded.records == batch);

  SUBCASE("filters") {
    RecordFilter by_student{.student_id = "S1"};
    CHECK(load_records(store, by_student).records.size() == 2);
    RecordFilter window{.from = Date{year{2024}, month{2}, day{5}}, .to = Date{year{2024}, month{3}, day{5}}};
    CHECK(load_records(store, window).records.size() == 2);
    RecordFilter narrow{.from = Date{year{2024}, month{2}, day{6}}, .to = Date{year{2024}, month{3}, day{4}}};
    CHECK(load_records(store, narrow).records.empty());
  }
}

TEST_CASE("encode/decode") {
  const auto r = rec("id \"quoted\"", 2023, 12, 31, 0.1);
  const auto line = encode_record(r);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(decode_record(line) == r);
  std::string err;
  CHECK_FALSE(decode_record("{\"student_id\":\"x\"}", &err));
  CHECK_FALSE(err.empty());
  CHECK_FALSE(decode_record("not json", &err));
  CHECK_FALSE(decode_record("{\"student_id\":\"x\",\"date\":\"2024-01-01\",\"counts\":{\"pap\":-1}}"));
}

TEST_CASE("corrupt and torn lines are skipped and reported") {
  TempStore tmp;
  auto store = append_records(open_store(tmp.path), std::vector{rec("S1", 2024, 1, 1, 1)});
  {
    std::ofstream out(tmp.path, std::ios::app | std::ios::binary);
    out << "garbage line\n{\"student_id\":\"torn";
  }
  store = open_store(tmp.path);
  store = append_records(store, std::vector{rec("S2", 2024, 1, 2, 2)});
  auto loaded = load_records(store);
  REQUIRE(loaded.records.size() == 2);
  CHECK(loaded.records[1].student_id == "S2");
  REQUIRE(loaded.errors.size() == 2);
  CHECK(loaded.errors[0].line == 2);
  CHECK(loaded.errors[1].line == 3);
}

TEST_CASE("a held lock makes append fail with StoreLocked and leaves the file alone") {
  TempStore tmp;
  auto store = append_records(open_store(tmp.path), std::vector{rec("S1", 2024, 1, 1, 1)});
  const auto before = slurp(tmp.path);
  const int fd = ::open(tmp.path.c_str(), O_RDONLY);
  REQUIRE(fd >= 0);
  REQUIRE(::flock(fd, LOCK_EX) == 0);
  CHECK_THROWS_AS(append_records(store, std::vector{rec("S2", 2024, 1, 1, 1)}), StoreLocked);
  ::flock(fd, LOCK_UN);
  ::close(fd);
  CHECK(slurp(tmp.path) == before);
  CHECK_NOTHROW(append_records(store, std::vector{rec("S2", 2024, 1, 1, 1)}));
}

TEST_CASE("property: appends preserve the existing prefix and round-trip") {
  testing::Gen gen(12);
  const std::vector<std::string> vars{"pap", "tardiness", "absenteeism"};
  for (int trial = 0; trial < 30; ++trial) {
    TempStore tmp;
    auto store = open_store(tmp.path);
    std::vector<ReferralRecord> all;
    const int batches = gen.integer(1, 5);
    for (int b = 0; b < batches; ++b) {
      std::vector<ReferralRecord> batch;
      const int n = gen.integer(0, 10);
      for (int i = 0; i < n; ++i) batch.push_back(gen.record(vars));
      const auto before = slurp(tmp.path);
      store = append_records(store, batch);
      const auto after = slurp(tmp.path);
      CHECK(after.compare(0, before.size(), before) == 0);
      all.insert(all.end(), batch.begin(), batch.end());
      CHECK(store.record_count == all.size());
    }
    auto loaded = load_records(store);
    CHECK(loaded.errors.empty());
    CHECK(loaded.records == all);
  }
}
