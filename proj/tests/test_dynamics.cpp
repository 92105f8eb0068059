#include <cmath>
#include <numbers>

#include <doctest.h>

#include "fixtures.hpp"
#include "lienard/dynamics.hpp"
#include "lienard/errors.hpp"

using namespace lienard;

TEST_SUITE("dynamics") {

TEST_CASE("critical point stays put") {
  const LienardSystem sys = fixtures::load_system("example1.system.json");
  IntegratorConfig cfg;
  cfg.max_time = 2.0;
  const OrbitTrace tr = flow(sys, 0.0, 0.0, cfg, false);
  CHECK(tr.terminal == TerminalEvent::MaxTime);
  CHECK(std::abs(tr.x_end) < 1e-14);
  CHECK(std::abs(tr.y_end) < 1e-14);
}

TEST_CASE("harmonic oscillator closes after one period") {
  const LienardSystem sys = fixtures::conservative();
  IntegratorConfig cfg;
  cfg.max_time = 2.0 * std::numbers::pi;
  const OrbitTrace tr = flow(sys, 0.0, 0.5, cfg, false);
  CHECK(tr.terminal == TerminalEvent::MaxTime);
  CHECK(std::abs(tr.x_end - 0.0) < 1e-8);
  CHECK(std::abs(tr.y_end - 0.5) < 1e-8);
}

TEST_CASE("conservative half return is the identity") {
  const LienardSystem sys = fixtures::conservative();
  const IntegratorConfig cfg;
  for (double y0 : {0.1, 0.5, 1.0, 2.0}) {
    const double p = half_return(sys, y0, cfg);
    CHECK(std::abs(p - y0) < 10.0 * cfg.rel_tol * y0);
    CHECK(std::abs(p - y0) < 1e-8);
  }
}

TEST_CASE("conservative geometry of the half turn") {
  const LienardSystem sys = fixtures::conservative();
  const IntegratorConfig cfg;
  const HalfTurnResult ht = half_turn(sys, 1.0, cfg);
  CHECK(ht.p == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ht.alpha_cross == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(ht.amplitude == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(ht.f_dy) < 1e-14);  // F identically zero
  CHECK(ht.duration == doctest::Approx(std::numbers::pi).epsilon(1e-8));
}

TEST_CASE("linear damping reproduces the exact focus contraction") {
  // F(x) = eps * x gives a linear focus; the half-return map is exactly
  // y0 * exp(-eps * pi / (2 * omega)) with omega = sqrt(1 - eps^2 / 4).
  const IntegratorConfig cfg;
  for (double eps : {0.2, -0.2, 0.05}) {
    const LienardSystem sys{
        OddPiecewiseCurve({LinearSegment{0.0, kInf, eps, 0.0, 0.0}}),
        RestoringFunction()};
    const double omega = std::sqrt(1.0 - 0.25 * eps * eps);
    const double factor = std::exp(-eps * std::numbers::pi / (2.0 * omega));
    for (double y0 : {0.4, 1.0}) {
      const double p = half_return(sys, y0, cfg);
      CHECK(p == doctest::Approx(y0 * factor).epsilon(1e-9));
    }
  }
}

TEST_CASE("example 1 orbits spiral outward near the origin") {
  const LienardSystem sys = fixtures::load_system("example1.system.json");
  const IntegratorConfig cfg;
  CHECK(half_return(sys, 0.05, cfg) > 0.05);

  const TurnsResult turn = run_turns(sys, 0.1, 1, cfg, false);
  REQUIRE(turn.crossings.size() == 2);
  const double y_end = turn.crossings.back().y;
  CHECK(y_end > 0.0);
  CHECK(potential_v(sys, 0.0, y_end) > potential_v(sys, 0.0, 0.1));
}

TEST_CASE("example 1 fixed points of the half-return map") {
  const LienardSystem sys = fixtures::load_system("example1.system.json");
  const IntegratorConfig cfg;
  CHECK(std::abs(half_return(sys, 0.26731065, cfg) - 0.26731065) < 1e-6);
  CHECK(std::abs(half_return(sys, 0.5749823, cfg) - 0.5749823) < 1e-5);
}

TEST_CASE("potential function") {
  const LienardSystem sys = fixtures::conservative();
  CHECK(potential_v(sys, 0.0, 0.7) == doctest::Approx(0.245).epsilon(1e-15));
  CHECK(potential_v(sys, 0.3, 0.4) == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("half-turn potential change equals the F dy integral") {
  // Start heights stay below example 2's escape threshold (~0.578).
  for (const char* name :
       {"example1.system.json", "example2.system.json",
        "example3.system.json"}) {
    const LienardSystem sys = fixtures::load_system(name);
    const IntegratorConfig cfg;
    for (double y0 : {0.08, 0.12, 0.18, 0.25, 0.3, 0.38, 0.45, 0.5, 0.52,
                      0.55}) {
      const HalfTurnResult ht = half_turn(sys, y0, cfg);
      const double dv = 0.5 * (ht.p * ht.p - y0 * y0);
      CHECK(std::abs(dv - ht.f_dy) < 1e-6);
    }
  }
}

TEST_CASE("half-return map is strictly increasing") {
  const LienardSystem sys = fixtures::load_system("example1.system.json");
  const IntegratorConfig cfg;
  double prev = half_return(sys, 0.1, cfg);
  for (int i = 1; i <= 12; ++i) {
    const double y0 = 0.1 + 0.05 * i;
    const double p = half_return(sys, y0, cfg);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("full return equals the iterated half return") {
  const LienardSystem sys = fixtures::load_system("example1.system.json");
  const IntegratorConfig cfg;
  for (double y0 : {0.2, 0.3, 0.5}) {
    const TurnsResult turn = run_turns(sys, y0, 1, cfg, false);
    REQUIRE(turn.crossings.size() == 2);
    const double full = turn.crossings[1].y;
    const double iterated = half_return(sys, half_return(sys, y0, cfg), cfg);
    CHECK(std::abs(full - iterated) < 1e-8);
  }
}

TEST_CASE("tolerance tightening converges") {
  const LienardSystem sys = fixtures::load_system("example1.system.json");
  IntegratorConfig coarse;
  coarse.rel_tol = 1e-6;
  IntegratorConfig mid;
  mid.rel_tol = 1e-8;
  IntegratorConfig fine;
  fine.rel_tol = 1e-10;
  const double pc = half_return(sys, 0.3, coarse);
  const double pm = half_return(sys, 0.3, mid);
  const double pf = half_return(sys, 0.3, fine);
  CHECK(std::abs(pf - pm) < std::abs(pm - pc));
  CHECK(std::abs(pf - pm) < 1e-8);
}

TEST_CASE("no return within the time budget") {
  const LienardSystem sys = fixtures::load_system("example1.system.json");
  IntegratorConfig cfg;
  cfg.max_time = 0.5;
  try {
    half_return(sys, 0.3, cfg);
    FAIL("expected NoReturn");
  } catch (const Error& e) {
    CHECK(e.code() == "NoReturn");
  }
}

TEST_CASE("start validation") {
  const LienardSystem sys = fixtures::conservative();
  const IntegratorConfig cfg;
  CHECK_THROWS_AS(half_return(sys, -1.0, cfg), Error);
  CHECK_THROWS_AS(half_return(sys, 0.0, cfg), Error);
  CHECK_THROWS_AS(run_turns(sys, 0.5, 0, cfg), Error);
}

}  // TEST_SUITE
