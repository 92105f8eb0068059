#include <cmath>
#include <random>

#include <doctest.h>

#include "fixtures.hpp"
#include "lienard/curves.hpp"
#include "lienard/errors.hpp"

using namespace lienard;

namespace {

bool has_code(const Error& e, const char* code) {
  return e.code() == code;
}

}  // namespace

TEST_SUITE("curves") {

TEST_CASE("example 1 evaluation") {
  const LienardSystem sys = fixtures::load_system("example1.system.json");
  const auto& F = sys.F;
  CHECK(std::abs(F(0.0)) < 1e-12);
  CHECK(F(0.1) == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(F(-0.1) == -F(0.1));
  CHECK(std::abs(F(0.2)) < 1e-12);
  CHECK(F(0.6) == doctest::Approx(-0.4 / 3.0).epsilon(1e-12));
}

TEST_CASE("example 1 derivative") {
  const LienardSystem sys = fixtures::load_system("example1.system.json");
  const auto& F = sys.F;
  CHECK(std::abs(F.derivative(0.1)) < 1e-12);
  const double eight_thirds = 8.0 / 3.0;
  CHECK(F.derivative(0.2) == doctest::Approx(eight_thirds).epsilon(1e-9));
  CHECK(F.derivative(0.2 - 1e-9) ==
        doctest::Approx(eight_thirds).epsilon(1e-5));
  CHECK(F.derivative(0.2 + 1e-9) ==
        doctest::Approx(eight_thirds).epsilon(1e-5));
  CHECK(F.derivative(0.6) == doctest::Approx(-4.0 / 3.0).epsilon(1e-12));
  CHECK(F.derivative(-0.6) == F.derivative(0.6));  // even derivative
}

TEST_CASE("positive zeros") {
  const auto z1 = fixtures::load_system("example1.system.json").F
                      .positive_zeros();
  REQUIRE(z1.size() == 2);
  CHECK(z1[0] == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(z1[1] == doctest::Approx(0.5).epsilon(1e-9));

  const auto z3 = fixtures::load_system("example3.system.json").F
                      .positive_zeros();
  REQUIRE(z3.size() == 3);
  CHECK(z3[0] == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(z3[1] == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(z3[2] == doctest::Approx(0.4).epsilon(1e-9));

  const OddPiecewiseCurve line({LinearSegment{0.0, kInf, 1.0, 0.0, 0.0}});
  CHECK(line.positive_zeros().empty());
}

TEST_CASE("zero consistency") {
  for (const char* name :
       {"example1.system.json", "example2.system.json",
        "example3.system.json"}) {
    const LienardSystem sys = fixtures::load_system(name);
    for (double a : sys.F.positive_zeros()) CHECK(std::abs(sys.F(a)) < 1e-9);
  }
}

TEST_CASE("extrema") {
  const auto e1 = fixtures::load_system("example1.system.json").F.extrema();
  REQUIRE(e1.size() == 2);
  CHECK(e1[0].x == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(e1[0].value == doctest::Approx(-0.1).epsilon(1e-9));
  CHECK(e1[1].x == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(e1[1].value == doctest::Approx(0.1).epsilon(1e-9));

  const auto e3 = fixtures::load_system("example3.system.json").F.extrema();
  REQUIRE(e3.size() == 3);
  CHECK(e3[0].x == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(e3[1].x == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(e3[2].x == doctest::Approx(0.3).epsilon(1e-12));

  const auto e2 = fixtures::load_system("example2.system.json").F.extrema();
  REQUIRE(e2.size() == 2);
  CHECK(e2[0].x == doctest::Approx(0.144).epsilon(1e-12));
  CHECK(e2[1].x == doctest::Approx(0.407).epsilon(1e-12));

  const OddPiecewiseCurve ramp({LinearSegment{0.0, kInf, 2.0, 0.0, 0.0}});
  CHECK(ramp.extrema().empty());
}

TEST_CASE("restoring function antiderivative") {
  const RestoringFunction g_x;
  CHECK(g_x.antiderivative(0.0) == 0.0);
  CHECK(g_x.antiderivative(0.4) == doctest::Approx(0.08).epsilon(1e-15));
  CHECK(g_x.antiderivative(-0.4) == g_x.antiderivative(0.4));

  const RestoringFunction g_cubic({{1, 1.0}, {3, 1.0}});
  CHECK(g_cubic.antiderivative(1.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(g_cubic(0.5) == doctest::Approx(0.625).epsilon(1e-15));

  CHECK_THROWS_AS(RestoringFunction({{2, 1.0}}), Error);
  CHECK_THROWS_AS(RestoringFunction({{1, -1.0}}), Error);
  CHECK_THROWS_AS(RestoringFunction({{1, 0.0}}), Error);
}

TEST_CASE("validation reports") {
  // Gap between segments: coverage failure.
  std::vector<Segment> gap = {
      LinearSegment{0.0, 0.2, 1.0, 0.0, 0.0},
      LinearSegment{0.3, kInf, 1.0, 0.3, 0.2},
  };
  const ValidationReport rep = validate_segments(gap, CurveOptions{});
  CHECK_FALSE(rep.coverage_ok);
  CHECK_FALSE(rep.structurally_ok());
  CHECK_THROWS_AS(OddPiecewiseCurve{gap}, Error);

  // Example 1 is analytically exact and C1.
  const LienardSystem s1 = fixtures::load_system("example1.system.json");
  CHECK(s1.F.validation().strict_ok(true));
  CHECK(s1.F.validation().max_slope_residual < 1e-6);

  // Example 2's printed constants are rounded: residuals sit between the
  // strict and the rounded gates before offsets are resolved.
  Json raw2 = read_json_file(fixtures::path("example2.system.json"));
  raw2["resolve_offsets"] = false;
  const LienardSystem s2raw = system_from_json(raw2);
  CHECK(s2raw.F.validation().rounded_ok());
  CHECK_FALSE(s2raw.F.validation().strict_ok(false));
  CHECK(s2raw.F.validation().max_value_residual < 1e-4);
  CHECK(s2raw.F.validation().f0_residual > 1e-12);

  // With offsets resolved the curve is exactly continuous and odd.
  const LienardSystem s2 = fixtures::load_system("example2.system.json");
  CHECK(s2.F.validation().strict_ok(false));
  CHECK(s2.F(0.0) == 0.0);
}

TEST_CASE("oddness is structural") {
  const LienardSystem sys = fixtures::load_system("example2.system.json");
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double x = dist(rng);
    CHECK(sys.F(-x) + sys.F(x) == 0.0);
  }
}

TEST_CASE("antiderivative strictly increasing") {
  const RestoringFunction g({{1, 0.5}, {3, 2.0}});
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    double x1 = dist(rng), x2 = dist(rng);
    if (x1 == x2) continue;
    if (x1 > x2) std::swap(x1, x2);
    CHECK(g.antiderivative(x1) < g.antiderivative(x2));
  }
}

TEST_CASE("derivative matches finite differences") {
  for (const char* name :
       {"example1.system.json", "example3.system.json"}) {
    const LienardSystem sys = fixtures::load_system(name);
    std::mt19937 rng(23);
    for (const auto& seg : sys.F.segments()) {
      const double lo = segment_lo(seg);
      const double hi = std::isfinite(segment_hi(seg)) ? segment_hi(seg)
                                                       : lo + 1.0;
      const double w = hi - lo;
      std::uniform_real_distribution<double> dist(lo + 0.01 * w,
                                                  hi - 0.01 * w);
      for (int i = 0; i < 100; ++i) {
        const double x = dist(rng);
        const double h = 1e-6 * std::max(1.0, std::abs(x));
        const double fd = (sys.F(x + h) - sys.F(x - h)) / (2.0 * h);
        const double d = sys.F.derivative(x);
        CHECK(std::abs(d - fd) <= 1e-5 * std::max(1.0, std::abs(d)));
      }
    }
  }
}

TEST_CASE("vertical tangent handling") {
  // Arc ending where the root argument vanishes: flagged, and the slope
  // raises there.
  std::vector<Segment> segs = {
      ArcSegment{0.0, 0.2, 0.0, -0.1, 0.1, 0.2},
      LinearSegment{0.2, kInf, -1.0, 0.2, -0.1},
  };
  const OddPiecewiseCurve curve(segs, {false, false, true});
  CHECK_FALSE(curve.validation().warnings.empty());
  try {
    curve.derivative(0.2);
    FAIL("expected VerticalTangent");
  } catch (const Error& e) {
    CHECK(has_code(e, "VerticalTangent"));
  }
}

TEST_CASE("non-simple zero detection") {
  // Arc touching zero tangentially at its center.
  const ArcSegment touch{0.1, 0.5, 0.3, 0.1, -0.1, 0.3};
  const double v_in = touch.value(0.1);
  std::vector<Segment> segs = {
      LinearSegment{0.0, 0.1, v_in / 0.1, 0.0, 0.0},
      touch,
      LinearSegment{0.5, kInf, 1.0, 0.5, touch.value(0.5)},
  };
  const OddPiecewiseCurve curve(segs);
  try {
    curve.positive_zeros();
    FAIL("expected NonSimpleZero");
  } catch (const Error& e) {
    CHECK(has_code(e, "NonSimpleZero"));
  }

  // Identically-zero flat piece.
  const OddPiecewiseCurve flat(
      {LinearSegment{0.0, kInf, 0.0, 0.0, 0.0}});
  CHECK_THROWS_AS(flat.positive_zeros(), Error);
}

}  // TEST_SUITE
