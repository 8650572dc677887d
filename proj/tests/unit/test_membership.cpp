#include <cmath>

#include "doctest.h"
#include "fuzzdss/error.hpp"
#include "fuzzdss/membership.hpp"
#include "support/generators.hpp"

using namespace fuzzdss;
using MF = MembershipFunction;

TEST_CASE("eval_mf at peaks, shoulders and linear segments") {
  CHECK(eval_mf(MF::triangle(1, 3, 5), 3) == 1.0);
  CHECK(eval_mf(MF::shoulder_right(2, 7), 9) == 1.0);
  CHECK(eval_mf(MF::triangle(1, 3, 5), 4) == doctest::Approx(0.5).epsilon(1e-15));

  const auto low = MF::shoulder_left(0, 3);
  CHECK(low(-1) == 1.0);
  CHECK(low(0) == 1.0);
  CHECK(low(3) == 0.0);
  CHECK(low(1) == doctest::Approx(2.0 / 3.0));

  const auto high = MF::shoulder_right(2, 7);
  CHECK(high(2) == 0.0);
  CHECK(high(7) == 1.0);
  CHECK(high(3) == doctest::Approx(0.2));

  const auto tri = MF::triangle(1, 3, 5);
  CHECK(tri(1) == 0.0);
  CHECK(tri(5) == 0.0);
  CHECK(tri(0) == 0.0);
  CHECK(tri(2) == 0.5);
}

TEST_CASE("shape invariants are enforced") {
  CHECK_THROWS_AS(MF::triangle(3, 1, 5), ModelError);
  CHECK_THROWS_AS(MF::triangle(1, 1, 5), ModelError);
  CHECK_THROWS_AS(MF::shoulder_left(3, 3), ModelError);
  CHECK_THROWS_AS(MF::shoulder_right(4, 2), ModelError);
  CHECK_THROWS_AS(MF::triangle(0, NAN, 1), ModelError);
  CHECK_FALSE(MF::check(Shape::shoulder_left, 0, 99, 3).has_value());  // b ignored
  CHECK(MF::shoulder_left(0, 3).b == 0.0);
}

TEST_CASE("shape names round-trip") {
  for (auto s : {Shape::shoulder_left, Shape::triangle, Shape::shoulder_right}) {
    CHECK(parse_shape(to_string(s)) == s);
  }
  CHECK_FALSE(parse_shape("trapezoid").has_value());
}

TEST_CASE("level crossings land on the requested level") {
  const auto tri = MF::triangle(0, 1, 2);
  auto xs = tri.level_crossings(0.5);
  REQUIRE(xs.size() == 2);
  CHECK(xs[0] == 0.5);
  CHECK(xs[1] == 1.5);
  CHECK(tri.level_crossings(1.0).empty());
  CHECK(MF::shoulder_left(0, 4).level_crossings(0.25) == std::vector<double>{3.0});
}

TEST_CASE("property: degrees are in [0,1] and Lipschitz in the max slope") {
  testing::Gen gen(0x5eed1);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto mf = gen.membership(-10, 10);
    const double slope = mf.max_slope();
    for (int k = 0; k < 20; ++k) {
      const double x = gen.real(-15, 15);
      const double eps = gen.real(1e-9, 0.5);
      const double y = mf(x);
      CHECK((y >= 0.0 && y <= 1.0));
      CHECK(std::abs(mf(x + eps) - y) <= slope * eps * (1 + 1e-9) + 1e-12);
    }
    for (double x : mf.breakpoints()) {
      const double y = mf(x);
      CHECK((y == 0.0 || y == 1.0));
    }
  }
}
