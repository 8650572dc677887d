#include "fuzzdss/builtin.hpp"

#include "fuzzdss/dsl.hpp"

namespace fuzzdss {

namespace {

struct CountRanges {
  double low_from, low_to;
  double medium_from, medium_to;
  double high_from, high_to;
};

LinguisticVariable count_variable(std::string name, std::string display, const CountRanges& r) {
  using MF = MembershipFunction;
  return {std::move(name),
          std::move(display),
          0.0,
          r.high_to,
          {{"low", MF::shoulder_left(r.low_from, r.low_to)},
           {"medium", MF::triangle(r.medium_from, (r.medium_from + r.medium_to) / 2.0, r.medium_to)},
           {"high", MF::shoulder_right(r.high_from, r.high_to)}}};
}

}  // namespace

Model builtin_student_model() {
  using MF = MembershipFunction;
  Model model;
  model.name = "student_behavior";
  model.inputs = {
      count_variable("pap", "Poor Academic Performance", {0, 3, 1, 5, 2, 7}),
      count_variable("tardiness", "Tardiness", {0, 4, 3, 8, 6, 12}),
      count_variable("absenteeism", "Absenteeism", {0, 3, 1, 5, 2, 7}),
  };
  model.output = {"intervention",
                  "Intervention",
                  0.0,
                  6.0,
                  {{"workshop_counseling", MF::triangle(0, 1, 2)},
                   {"tutoring_advisor", MF::triangle(2, 3, 4)},
                   {"lighter_load", MF::triangle(4, 5, 6)}}};
  // The published bands read 0.0-2.0, 2.1-4.0, 4.1-6.0; the 0.1 gaps are
  // closed so that every crisp output classifies.
  model.bands = {
      {"Workshop & Counseling", "workshop_counseling", 0.0, 2.0},
      {"Tutoring & Advisor", "tutoring_advisor", 2.0, 4.0},
      {"Lighter load & Study more", "lighter_load", 4.0, 6.0},
  };

  struct Row {
    const char* pap;
    const char* tardiness;
    const char* absenteeism;
    const char* intervention;
  };
  static constexpr Row table[] = {
      {"low", "low", "low", "workshop_counseling"},
      {"low", "medium", "low", "workshop_counseling"},
      {"low", "high", "low", "workshop_counseling"},
      {"low", "medium", "medium", "tutoring_advisor"},
      {"low", "high", "medium", "tutoring_advisor"},
      {"low", "high", "high", "lighter_load"},
      {"medium", "low", "low", "tutoring_advisor"},
      {"medium", "low", "medium", "tutoring_advisor"},
      {"medium", "medium", "medium", "lighter_load"},
      {"medium", "high", "medium", "tutoring_advisor"},
      {"medium", "medium", "high", "lighter_load"},
      {"high", "low", "low", "lighter_load"},
      {"high", "low", "medium", "lighter_load"},
      {"high", "medium", "low", "lighter_load"},
      {"high", "medium", "medium", "lighter_load"},
      {"high", "high", "high", "lighter_load"},
  };
  for (const auto& row : table) {
    model.rules.push_back({{{"pap", row.pap}, {"tardiness", row.tardiness}, {"absenteeism", row.absenteeism}},
                           row.intervention});
  }
  return model;
}

std::string builtin_student_source() { return serialize_model(builtin_student_model()); }

}  // namespace fuzzdss
