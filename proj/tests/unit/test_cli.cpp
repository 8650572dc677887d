#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli/cli.hpp"
#include "doctest.h"
#include "fuzzdss/builtin.hpp"

using namespace fuzzdss;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

const std::string header = "student_id,date,pap,tardiness,absenteeism\n";

fs::path temp_file(const std::string& suffix, const std::string& content) {
  static int counter = 0;
  auto p = fs::temp_directory_path() /
           ("fuzzdss-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + suffix);
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == cli::exit_ok);
  CHECK(run({}).code == cli::exit_usage);
  CHECK(run({"frobnicate"}).code == cli::exit_usage);
  CHECK(run({"eval", "--bogus"}).code == cli::exit_usage);
  CHECK(run({"eval", "--in", "pap"}).code == cli::exit_usage);
  CHECK(run({"eval", "--in", "pap=abc,tardiness=1,absenteeism=1"}).code == cli::exit_usage);
  const auto r = run({"frobnicate"});
  CHECK_FALSE(r.err.empty());
  CHECK(r.out.empty());
}

TEST_CASE("eval exit codes") {
  const auto ok = run({"eval", "--in", "pap=1,tardiness=1,absenteeism=2"});
  CHECK(ok.code == cli::exit_ok);
  CHECK(ok.out.find("Workshop & Counseling") != std::string::npos);

  const auto dead = run({"eval", "--in", "pap=0,tardiness=3,absenteeism=3"});
  CHECK(dead.code == cli::exit_no_rule_fired);
  CHECK(dead.out.find("no rule") != std::string::npos);

  CHECK(run({"eval", "--in", "pap=99,tardiness=1,absenteeism=1"}).code == cli::exit_data);
  CHECK(run({"eval", "--in", "pap=1,tardiness=1"}).code == cli::exit_data);
  CHECK(run({"eval", "--in", "pap=1,tardiness=1,absenteeism=1,mood=3"}).code == cli::exit_data);
}

TEST_CASE("eval --json parses and carries the trace") {
  const auto r = run({"eval", "--json", "--in", "pap=1,tardiness=1,absenteeism=2"});
  REQUIRE(r.code == cli::exit_ok);
  const auto b = json::parse(r.out);
  CHECK(b["category"] == "Workshop & Counseling");
  CHECK(b["fired_rules"].size() == 1);
}

TEST_CASE("model files") {
  const auto good = temp_file(".fzm", builtin_student_source());
  const auto bad = temp_file(".fzm", "model \"x\"\nrule if a is b then c\n");
  CHECK(run({"--model", good.string(), "eval", "--in", "pap=1,tardiness=1,absenteeism=2"}).code == cli::exit_ok);
  const auto broken = run({"--model", bad.string(), "validate"});
  CHECK(broken.code == cli::exit_data);
  CHECK(broken.err.find(bad.string() + ":") != std::string::npos);
  CHECK(run({"--model", "/nonexistent.fzm", "validate"}).code == cli::exit_data);

  const auto fmt = run({"model", "fmt", good.string()});
  CHECK(fmt.code == cli::exit_ok);
  CHECK(fmt.out == builtin_student_source());
  CHECK(run({"model", "fmt", "-"}, builtin_student_source()).out == builtin_student_source());
  CHECK(run({"model", "show"}).code == cli::exit_ok);
  fs::remove(good);
  fs::remove(bad);
}

TEST_CASE("validate reports diagnostics") {
  const auto r = run({"validate"});
  CHECK(r.code == cli::exit_ok);
  CHECK_FALSE(r.out.empty());
  const auto j = run({"--json", "validate", "--grid", "8"});
  CHECK(j.code == cli::exit_ok);
  CHECK_FALSE(json::parse(j.out, nullptr, false).is_discarded());
}

TEST_CASE("batch on an empty file reports zeros") {
  const auto r = run({"--json", "batch", "-"}, header);
  REQUIRE(r.code == cli::exit_ok);
  const auto b = json::parse(r.out);
  CHECK(b["rows"].empty());
  CHECK(b["report"]["total"] == 0);
  for (const auto& [label, n] : b["report"]["counts"].items()) CHECK(n == 0);
}

TEST_CASE("batch keeps going past a bad row") {
  const auto r = run({"batch", "-"}, header + "A,2024-01-01,1,1,2\nB,2024-01-01,x,1,2\nC,2024-01-01,0,0,0\n");
  CHECK(r.code == cli::exit_ok);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  CHECK(r.err.find("row 3") != std::string::npos);
  CHECK(r.out.find("row 2 ") != std::string::npos);
  CHECK(r.out.find("row 4 ") != std::string::npos);

  const auto j = json::parse(run({"--json", "batch", "-"}, header + "A,2024-01-01,1,1,2\nB,2024-01-01,x,1,2\n").out);
  CHECK(j["rows"].size() == 1);
  CHECK(j["errors"].size() == 1);
}

TEST_CASE("batch compares an expected column") {
  const auto r = run({"--json", "batch", "-"},
                     "student_id,date,pap,tardiness,absenteeism,expected\n"
                     "A,2024-01-01,1,1,2,Workshop & Counseling\n"
                     "B,2024-01-01,7,5,4,Tutoring & Advisor\n");
  REQUIRE(r.code == cli::exit_ok);
  const auto b = json::parse(r.out);
  CHECK(b["compared"] == 2);
  CHECK(b["mismatched_rows"] == json::array({3}));
  CHECK(b["expected_report"]["counts"]["Tutoring & Advisor"] == 1);
}

TEST_CASE("batch output is deterministic") {
  const std::string csv = header + "A,2024-01-01,4,2,1\nB,2024-01-02,2,8,2\n";
  CHECK(run({"batch", "-"}, csv).out == run({"batch", "-"}, csv).out);
  CHECK(run({"--json", "batch", "-"}, csv).out == run({"--json", "batch", "-"}, csv).out);
}

TEST_CASE("unreadable inputs are data errors") {
  CHECK(run({"batch", "/nonexistent/x.csv"}).code == cli::exit_data);
  CHECK(run({"batch", "-"}, "who,what\n1,2\n").code == cli::exit_data);
}

TEST_CASE("surface writes CSV or JSON") {
  const auto csv = run({"surface", "--x", "pap", "--y", "tardiness", "--fixed", "absenteeism=0", "--resolution", "3"});
  REQUIRE(csv.code == cli::exit_ok);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 10);
  const auto j = run({"--json", "surface", "--x", "pap", "--y", "tardiness", "--fixed", "absenteeism=0",
                      "--resolution", "3"});
  REQUIRE(j.code == cli::exit_ok);
  CHECK(json::parse(j.out)["values"].size() == 3);
  CHECK(run({"surface", "--x", "pap", "--y", "pap", "--fixed", "absenteeism=0"}).code == cli::exit_data);
}

TEST_CASE("ingest and report through a store") {
  const auto store = fs::temp_directory_path() / ("fuzzdss-cli-store-" + std::to_string(::getpid()) + ".jsonl");
  fs::remove(store);
  CHECK(run({"--store", store.string(), "report"}).code == cli::exit_ok);
  const auto in = run({"--store", store.string(), "ingest", "-"},
                      header + "A,2024-01-01,1,1,2\nB,2024-02-01,7,5,4\n");
  CHECK(in.code == cli::exit_ok);
  const auto all = json::parse(run({"--json", "--store", store.string(), "report"}).out);
  CHECK(all["total"] == 2);
  const auto jan = json::parse(run({"--json", "--store", store.string(), "report", "--to", "2024-01-31"}).out);
  CHECK(jan["total"] == 1);
  CHECK(jan["counts"]["Workshop & Counseling"] == 1);
  CHECK(run({"--store", store.string(), "report", "--from", "nope"}).code == cli::exit_usage);
  fs::remove(store);
}
