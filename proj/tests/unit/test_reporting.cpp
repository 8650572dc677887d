#include <algorithm>

#include "doctest.h"
#include "fuzzdss/builtin.hpp"
#include "fuzzdss/error.hpp"
#include "fuzzdss/json_io.hpp"
#include "fuzzdss/reporting.hpp"
#include "support/generators.hpp"

using namespace fuzzdss;

namespace {

const std::string W = "Workshop & Counseling";
const std::string T = "Tutoring & Advisor";
const std::string L = "Lighter load & Study more";

InferenceResult labelled(const std::string& category) {
  InferenceResult r;
  r.status = InferenceStatus::ok;
  r.crisp_value = 0.0;
  r.category = category;
  return r;
}

InferenceResult unfired() {
  InferenceResult r;
  r.status = InferenceStatus::no_rule_fired;
  return r;
}

ReferralRecord record(std::string id, std::map<std::string, double> counts) {
  return {std::move(id), Date{std::chrono::year{2024}, std::chrono::month{1}, std::chrono::day{1}},
          std::move(counts)};
}

}  // namespace

TEST_CASE("frequency report over the published labels") {
  const std::vector<InferenceResult> results{labelled(W), labelled(T), labelled(L), labelled(L), labelled(L),
                                             labelled(T), labelled(L), labelled(L), labelled(W), labelled(L)};
  const auto labels = band_labels(builtin_student_model());
  const auto report = frequency_report(results, labels);
  CHECK(report.counts == std::vector<std::pair<std::string, std::size_t>>{{W, 2}, {T, 2}, {L, 6}});
  CHECK(report.total == 10);
  CHECK(report.no_rule_fired_count == 0);
}

TEST_CASE("empty and singleton reports") {
  const auto labels = band_labels(builtin_student_model());
  const auto empty = frequency_report({}, labels);
  CHECK(empty.total == 0);
  CHECK(empty.counts.size() == 3);
  for (const auto& [label, n] : empty.counts) CHECK(n == 0);

  const std::vector<InferenceResult> one{unfired()};
  const auto single = frequency_report(one, labels);
  CHECK(single.total == 1);
  CHECK(single.no_rule_fired_count == 1);

  const std::vector<InferenceResult> stray{labelled("zeta"), labelled("alpha")};
  const auto extra = frequency_report(stray, labels);
  CHECK(extra.counts.size() == 5);
  CHECK(extra.counts[3].first == "alpha");
  CHECK(extra.counts[4].first == "zeta");
  CHECK(extra.count("zeta") == 1);
  CHECK(extra.count("missing") == 0);
}

TEST_CASE("property: frequency report ignores order and conserves the total") {
  testing::Gen gen(21);
  const std::vector<std::string> pool{W, T, L, "other"};
  const auto labels = band_labels(builtin_student_model());
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<InferenceResult> results;
    const int n = gen.integer(0, 40);
    for (int i = 0; i < n; ++i) {
      results.push_back(gen.coin(0.1) ? unfired() : labelled(pool[gen.integer(0, 3)]));
    }
    const auto report = frequency_report(results, labels);
    std::size_t sum = report.no_rule_fired_count;
    for (const auto& [label, count] : report.counts) sum += count;
    CHECK(sum == report.total);
    CHECK(report.total == results.size());
    std::shuffle(results.begin(), results.end(), gen.rng());
    CHECK(frequency_report(results, labels) == report);
  }
}

TEST_CASE("batch_infer turns binding problems into per-item errors") {
  const auto model = builtin_student_model();
  const std::vector<ReferralRecord> records{
      record("S1", {{"pap", 1}, {"tardiness", 1}, {"absenteeism", 2}, {"misconduct", 9}}),
      record("S2", {{"pap", 1}, {"absenteeism", 2}}),
      record("S3", {{"pap", 70}, {"tardiness", 1}, {"absenteeism", 2}}),
      record("S4", {{"pap", 0}, {"tardiness", 0}, {"absenteeism", 4}}),
  };
  const auto items = batch_infer(model, records);
  REQUIRE(items.size() == 4);
  REQUIRE(items[0].result);
  CHECK(items[0].result->category == W);
  CHECK(items[1].error);
  CHECK(items[1].error->find("tardiness") != std::string::npos);
  CHECK(items[2].error);
  CHECK(items[2].error->find("pap") != std::string::npos);
  REQUIRE(items[3].result);
  CHECK_FALSE(items[3].result->ok());

  const auto ok = successful_results(items);
  CHECK(ok.size() == 2);
  const auto report = frequency_report(ok, band_labels(model));
  CHECK(report.count(W) == 1);
  CHECK(report.no_rule_fired_count == 1);
}

TEST_CASE("surface grid corners and shape") {
  const auto model = builtin_student_model();
  const auto grid = surface_grid(model, "pap", "tardiness", {{"absenteeism", 0}}, 50);
  REQUIRE(grid.x_points.size() == 50);
  REQUIRE(grid.y_points.size() == 50);
  CHECK(grid.x_points.back() == 7.0);
  CHECK(grid.y_points.back() == 12.0);
  REQUIRE(grid.values[0][0]);
  CHECK(std::abs(*grid.values[0][0] - 1.0) <= 1e-9);

  const auto high = surface_grid(model, "pap", "tardiness", {{"absenteeism", 7}}, 50);
  REQUIRE(high.values[49][49]);
  CHECK(std::abs(*high.values[49][49] - 5.0) <= 1e-9);

  const auto tiny = surface_grid(model, "pap", "tardiness", {{"absenteeism", 0}}, 2);
  CHECK(tiny.values.size() == 2);
  CHECK(tiny.values[0].size() == 2);

  const auto csv = grid_to_csv(tiny);
  CHECK(csv.rfind("x,y,value,category\n0,0,1,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  const auto json = grid_to_json(tiny);
  CHECK(json["values"].size() == 2);
}

TEST_CASE("surface grid rejects bad requests") {
  const auto model = builtin_student_model();
  CHECK_THROWS_AS(surface_grid(model, "pap", "tardiness", {{"absenteeism", 0}}, 1), GridError);
  CHECK_THROWS_AS(surface_grid(model, "pap", "pap", {{"absenteeism", 0}}, 5), GridError);
  CHECK_THROWS_AS(surface_grid(model, "pap", "misconduct", {{"absenteeism", 0}}, 5), GridError);
  CHECK_THROWS_AS(surface_grid(model, "pap", "tardiness", {}, 5), GridError);
  CHECK_THROWS_AS(surface_grid(model, "pap", "tardiness", {{"absenteeism", 8}}, 5), GridError);
  CHECK_THROWS_AS(surface_grid(model, "pap", "tardiness", {{"absenteeism", 1}, {"pap", 1}}, 5), GridError);
}

TEST_CASE("property: every surface cell equals infer, and refinement keeps shared points") {
  const auto model = builtin_student_model();
  testing::Gen gen(55);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = gen.real(0, 7);
    const std::size_t r = static_cast<std::size_t>(gen.integer(2, 12));
    const auto coarse = surface_grid(model, "pap", "tardiness", {{"absenteeism", a}}, r);
    const auto fine = surface_grid(model, "pap", "tardiness", {{"absenteeism", a}}, 2 * r - 1);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) {
        const auto direct =
            infer(model, {{"pap", coarse.x_points[i]}, {"tardiness", coarse.y_points[j]}, {"absenteeism", a}});
        CHECK(coarse.values[i][j] == direct.crisp_value);
        CHECK(coarse.categories[i][j] == direct.category);
        CHECK(fine.x_points[2 * i] == doctest::Approx(coarse.x_points[i]).epsilon(1e-12));
        CHECK(fine.values[2 * i][2 * j].has_value() == coarse.values[i][j].has_value());
      }
    }
  }
}

TEST_CASE("uniform points") {
  CHECK(uniform_points(0, 7, 2) == std::vector<double>{0, 7});
  const auto pts = uniform_points(0, 1, 11);
  CHECK(pts.size() == 11);
  CHECK(pts.back() == 1.0);
  CHECK(std::is_sorted(pts.begin(), pts.end()));
}

TEST_CASE("frequency exports") {
  const std::vector<InferenceResult> results{labelled(W), unfired()};
  const auto report = frequency_report(results, band_labels(builtin_student_model()));
  const auto json = frequency_to_json(report);
  CHECK(json.dump() ==
        R"({"counts":{"Workshop & Counseling":1,"Tutoring & Advisor":0,"Lighter load & Study more":0},)"
        R"("no_rule_fired":1,"total":2})");
  const auto table = frequency_table(report);
  CHECK(table.find("Workshop & Counseling") != std::string::npos);
  CHECK(table.find("no rule fired") != std::string::npos);
}
