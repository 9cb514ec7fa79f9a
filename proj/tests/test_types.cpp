#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ckam/types.hpp"

using namespace ckam;

TEST_CASE("wrap_coord maps into [0, period) for any sign") {
  CHECK(wrap_coord(0.25, 1.0) == doctest::Approx(0.25));
  CHECK(wrap_coord(1.25, 1.0) == doctest::Approx(0.25));
  CHECK(wrap_coord(-0.25, 1.0) == doctest::Approx(0.75));
  CHECK(wrap_coord(-3.0, 1.0) == doctest::Approx(0.0));
  CHECK(wrap_coord(7.5, 2.0 * M_PI) == doctest::Approx(7.5 - 2.0 * M_PI));

  // Results always land inside the fundamental interval, even when rounding
  // in fmod would otherwise return the period itself.
  for (double x : {-1e9 - 0.3, -5.5, -1e-17, 0.0, 0.9999999999999999, 1e9 + 0.7}) {
    const double r = wrap_coord(x, 1.0);
    CHECK(r >= 0.0);
    CHECK(r < 1.0);
  }
}

TEST_CASE("wrap applies each chart's periods and preserves the rest") {
  State s{1.25, -0.5, 2.75, ModelTag::TwoWave};
  const State w = wrap(s);
  CHECK(w.c0 == doctest::Approx(0.25));
  CHECK(w.c1 == doctest::Approx(-0.5));  // momentum is not periodic
  CHECK(w.c2 == doctest::Approx(0.75));

  State u{8.0, -9.0, 7.0, ModelTag::QFlow};
  const State wu = wrap(u);
  CHECK(wu.c0 == doctest::Approx(8.0));  // x, y live on the plane
  CHECK(wu.c1 == doctest::Approx(-9.0));
  CHECK(wu.c2 == doctest::Approx(7.0 - 2.0 * M_PI));
}

TEST_CASE("wrap rejects non-finite states") {
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS((void)wrap({inf, 0.0, 0.0, ModelTag::TwoWave}), std::invalid_argument);
  CHECK_THROWS_AS((void)wrap({0.0, nan, 0.0, ModelTag::TwoWave}), std::invalid_argument);
  CHECK_THROWS_AS((void)wrap({0.0, 0.0, -inf, ModelTag::QFlow}), std::invalid_argument);
}

TEST_CASE("tangent vector arithmetic and norms") {
  const TangentVec a{1.0, 2.0, 3.0};
  const TangentVec b{-1.0, 0.5, 2.0};
  const TangentVec s = a + b;
  CHECK(s.v0 == doctest::Approx(0.0));
  CHECK(s.v1 == doctest::Approx(2.5));
  CHECK(s.v2 == doctest::Approx(5.0));
  const TangentVec d = a - b;
  CHECK(d.v0 == doctest::Approx(2.0));
  const TangentVec c = 2.0 * a;
  CHECK(c.v2 == doctest::Approx(6.0));
  CHECK(dot3(a, b) == doctest::Approx(-1.0 + 1.0 + 6.0));
  CHECK(norm3({3.0, 4.0, 0.0}) == doctest::Approx(5.0));
}

TEST_CASE("det3 of row triples matches hand expansion") {
  const TangentVec e0{1, 0, 0}, e1{0, 1, 0}, e2{0, 0, 1};
  CHECK(det3(e0, e1, e2) == doctest::Approx(1.0));
  CHECK(det3(e1, e0, e2) == doctest::Approx(-1.0));
  // Degenerate triple.
  CHECK(det3(e0, e0, e2) == doctest::Approx(0.0));
  const TangentVec a{2, 1, 0}, b{0, 3, 1}, c{1, 0, 4};
  // 2*(12-0) - 1*(0-1) + 0 = 25
  CHECK(det3(a, b, c) == doctest::Approx(25.0));
}

TEST_CASE("Mat3 times vector is the usual row action") {
  Mat3 m{};
  // [[1,2,0],[0,1,0],[3,0,1]]
  m(0, 0) = 1; m(0, 1) = 2; m(1, 1) = 1; m(2, 0) = 3; m(2, 2) = 1;
  const TangentVec v{1.0, -1.0, 2.0};
  const TangentVec r = m * v;
  CHECK(r.v0 == doctest::Approx(-1.0));
  CHECK(r.v1 == doctest::Approx(-1.0));
  CHECK(r.v2 == doctest::Approx(5.0));
}

TEST_CASE("status and model labels are stable") {
  CHECK(std::string(ToString(DetectionStatus::Detected)) == "detected");
  CHECK(std::string(ToString(DetectionStatus::None)) == "none");
  CHECK(std::string(ToString(DetectionStatus::Excluded)) == "excluded");
  CHECK(std::string(ToString(DetectionStatus::Error)) == "error");
  CHECK(std::string(ToString(ModelTag::TwoWave)) == "twowave");
  CHECK(std::string(ToString(ModelTag::QFlow)) == "qflow");
}
