#include <sstream>

#include "doctest.h"
#include "fuzzdss/referral.hpp"
#include "support/generators.hpp"

using namespace fuzzdss;
using namespace std::chrono;

namespace {

CsvIngest ingest(const std::string& text) {
  std::istringstream in(text);
  return parse_referral_csv(in);
}

}  // namespace

TEST_CASE("ISO dates are strict") {
  CHECK(parse_iso_date("2024-02-29") == Date{year{2024}, month{2}, day{29}});
  CHECK_FALSE(parse_iso_date("2023-02-29"));
  CHECK_FALSE(parse_iso_date("2024-2-29"));
  CHECK_FALSE(parse_iso_date("2024-02-29x"));
  CHECK_FALSE(parse_iso_date(""));
  CHECK(format_iso_date(Date{year{987}, month{3}, day{4}}) == "0987-03-04");
}

TEST_CASE("a well-formed row becomes a record") {
  auto r = ingest("student_id,date,pap,tardiness,absenteeism\nS001,2024-03-01,1,1,2\n");
  CHECK_FALSE(r.header_error);
  CHECK(r.errors.empty());
  CHECK(r.variables == std::vector<std::string>{"pap", "tardiness", "absenteeism"});
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].student_id == "S001");
  CHECK(r.records[0].recorded_at == Date{year{2024}, month{3}, day{1}});
  CHECK(r.records[0].counts == std::map<std::string, double>{{"pap", 1}, {"tardiness", 1}, {"absenteeism", 2}});
}

TEST_CASE("empty input and header-only input") {
  auto empty = ingest("");
  CHECK(empty.header_error);
  CHECK(empty.records.empty());

  auto header_only = ingest("student_id,date,pap\n");
  CHECK_FALSE(header_only.header_error);
  CHECK(header_only.records.empty());
  CHECK(header_only.errors.empty());
}

TEST_CASE("a negative count is a row error naming the row and field") {
  auto r = ingest("student_id,date,pap,tardiness\nS1,2024-01-01,1,2\nS2,2024-01-02,-3,1\nS3,2024-01-03,0,0\n");
  CHECK(r.records.size() == 2);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].row == 3);
  CHECK(r.errors[0].field == "pap");
  CHECK(r.errors[0].message.find("-3") != std::string::npos);
}

TEST_CASE("row problems are reported without aborting") {
  auto r = ingest(
      "\xEF\xBB\xBFstudent_id,date,pap\r\n"
      "S1,2024-01-01,1\r\n"
      "\r\n"
      "S2,2024-13-01,1\n"
      "S3,2024-01-01,abc\n"
      "S4,2024-01-01\n"
      "S5,2024-01-01,1,2\n"
      ",2024-01-01,1\n"
      "\"S,6\",2024-01-01,\n"
      "\"S7,2024-01-01,1\n"
      "  S8 ,2024-01-01, 4.5 \n");
  CHECK_FALSE(r.header_error);
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[1].student_id == "S8");
  CHECK(r.records[1].counts.at("pap") == 4.5);
  REQUIRE(r.errors.size() == 7);
  CHECK(r.errors[0].row == 4);
  CHECK(r.errors[0].field == "date");
  CHECK(r.errors[1].field == "pap");
  CHECK(r.errors[2].field.empty());
  CHECK(r.errors[3].field.empty());
  CHECK(r.errors[4].field == "student_id");
  CHECK(r.errors[5].field == "pap");
  CHECK(r.errors[6].message == "unterminated quoted field");
}

TEST_CASE("bad headers") {
  CHECK(ingest("id,date,pap\n").header_error);
  CHECK(ingest("student_id,date\n").header_error);
  CHECK(ingest("student_id,date,pap,pap\n").header_error);
  CHECK(ingest("student_id,date,pap,\n").header_error);
}

TEST_CASE("CSV field splitting and quoting") {
  CHECK(split_csv_line("a,\"b,c\",\"d\"\"e\"") == std::vector<std::string>{"a", "b,c", "d\"e"});
  CHECK(split_csv_line("a,,") == std::vector<std::string>{"a", "", ""});
  CHECK_FALSE(split_csv_line("\"open"));
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("property: write then parse returns the same records") {
  testing::Gen gen(8);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> vars;
    const int nvars = gen.integer(1, 4);
    while (static_cast<int>(vars.size()) < nvars) {
      auto v = gen.identifier();
      if (v != "date" && std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
    std::vector<ReferralRecord> records;
    const int n = gen.integer(0, 20);
    for (int i = 0; i < n; ++i) records.push_back(gen.record(vars));
    auto r = ingest(write_referral_csv(records, vars));
    REQUIRE_FALSE(r.header_error);
    CHECK(r.errors.empty());
    CHECK(r.variables == vars);
    CHECK(r.records == records);
  }
}
