#pragma once

#include <string>

#include "fuzzdss/model.hpp"

namespace fuzzdss {

/// Student-behavior referral model: poor academic performance, tardiness and
/// absenteeism counts mapped to one of three interventions by 16 rules.
///
/// Each input's Low/Medium/High count ranges [a1,b1], [a2,b2], [a3,b3] become
/// shoulder_left(a1,b1), triangle(a2,(a2+b2)/2,b2) and shoulder_right(a3,b3)
/// over the universe [0, b3]. The intervention scale 0-6 is split into three
/// adjacent bands, each carrying a triangle peaked at its midpoint.
Model builtin_student_model();

/// Canonical `.fzm` text of builtin_student_model().
std::string builtin_student_source();

}  // namespace fuzzdss
