#pragma once

// Brute-force Mamdani evaluation used only as a test oracle. It deliberately
// includes nothing from the engine: membership functions, the student model
// tables, min/max composition and the centroid are all re-stated here and the
// centroid is a midpoint Riemann sum on a dense uniform grid.

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace naive {

enum class Kind { left, tri, right };

struct Fuzzy {
  Kind kind;
  double p, q, r;  // left/right use p and r only

  double at(double x) const {
    switch (kind) {
      case Kind::left:
        return x <= p ? 1.0 : x >= r ? 0.0 : (r - x) / (r - p);
      case Kind::right:
        return x <= p ? 0.0 : x >= r ? 1.0 : (x - p) / (r - p);
      case Kind::tri:
        if (x <= p || x >= r) return 0.0;
        return x <= q ? (x - p) / (q - p) : (r - x) / (r - q);
    }
    return 0.0;
  }
};

/// Midpoint rule for the centroid of f over [lo, hi]. nullopt when the
/// sampled area is zero.
inline std::optional<double> riemann_centroid(double lo, double hi, std::size_t samples,
                                              const std::function<double(double)>& f) {
  const double h = (hi - lo) / static_cast<double>(samples);
  double area = 0.0;
  double moment = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double x = lo + (static_cast<double>(k) + 0.5) * h;
    const double y = f(x);
    area += y;
    moment += x * y;
  }
  if (area <= 0.0) return std::nullopt;
  return moment / area;
}

struct ClippedFuzzy {
  Fuzzy set;
  double level;
};

inline double clipped_max(const std::vector<ClippedFuzzy>& sets, double x) {
  double y = 0.0;
  for (const auto& s : sets) y = std::max(y, std::min(s.level, s.set.at(x)));
  return y;
}

// Student-behavior model transcribed from the published tables:
// Low/Medium/High count ranges per input and the intervention bands.
struct Ranges {
  double low_lo, low_hi, med_lo, med_hi, high_lo, high_hi;
};
inline constexpr Ranges pap_ranges{0, 3, 1, 5, 2, 7};
inline constexpr Ranges tardiness_ranges{0, 4, 3, 8, 6, 12};
inline constexpr Ranges absenteeism_ranges{0, 3, 1, 5, 2, 7};

inline std::array<Fuzzy, 3> input_sets(const Ranges& r) {
  return {Fuzzy{Kind::left, r.low_lo, 0, r.low_hi},
          Fuzzy{Kind::tri, r.med_lo, (r.med_lo + r.med_hi) * 0.5, r.med_hi},
          Fuzzy{Kind::right, r.high_lo, 0, r.high_hi}};
}

// 0 = Workshop & Counseling, 1 = Tutoring & Advisor, 2 = Lighter load & Study more
inline const std::array<std::string, 3> interventions{"Workshop & Counseling", "Tutoring & Advisor",
                                                      "Lighter load & Study more"};
inline constexpr std::array<Fuzzy, 3> intervention_sets{Fuzzy{Kind::tri, 0, 1, 2}, Fuzzy{Kind::tri, 2, 3, 4},
                                                        Fuzzy{Kind::tri, 4, 5, 6}};

// L=0, M=1, H=2; {pap, tardiness, absenteeism, intervention}
inline constexpr std::array<std::array<int, 4>, 16> rule_table{{
    {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 2, 0, 0}, {0, 1, 1, 1}, {0, 2, 1, 1}, {0, 2, 2, 2},
    {1, 0, 0, 1}, {1, 0, 1, 1}, {1, 1, 1, 2}, {1, 2, 1, 1}, {1, 1, 2, 2}, {2, 0, 0, 2},
    {2, 0, 1, 2}, {2, 1, 0, 2}, {2, 1, 1, 2}, {2, 2, 2, 2},
}};

struct NaiveOutcome {
  bool fired = false;
  std::optional<double> centroid;
  std::optional<std::string> category;
};

// The sampled centroid is only good to ~1e-6, so anything that close to a
// boundary is taken as on it.
inline std::string band_of(double v, double tie = 1e-6) {
  if (v <= 2.0 + tie) return interventions[0];
  if (v <= 4.0 + tie) return interventions[1];
  return interventions[2];
}

inline NaiveOutcome student_infer(double pap, double tardiness, double absenteeism,
                                  std::size_t samples = 100'000) {
  const auto ps = input_sets(pap_ranges);
  const auto ts = input_sets(tardiness_ranges);
  const auto as = input_sets(absenteeism_ranges);
  std::vector<ClippedFuzzy> clipped;
  for (const auto& row : rule_table) {
    const double w = std::min({ps[row[0]].at(pap), ts[row[1]].at(tardiness), as[row[2]].at(absenteeism)});
    if (w > 0.0) clipped.push_back({intervention_sets[row[3]], w});
  }
  NaiveOutcome out;
  out.fired = !clipped.empty();
  if (!out.fired) return out;
  out.centroid = riemann_centroid(0.0, 6.0, samples, [&](double x) { return clipped_max(clipped, x); });
  if (out.centroid) out.category = band_of(*out.centroid);
  return out;
}

}  // namespace naive
