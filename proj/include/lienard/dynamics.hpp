#pragma once

#include <vector>

#include "lienard/construction.hpp"
#include "lienard/curves.hpp"

namespace lienard {

// Phase-plane system dx/dt = y - F(x), dy/dt = -g(x). The origin is the only
// critical point (F(0) = 0 and g vanishes only there). Immutable; distinct
// integrations over the same system may run concurrently.
struct LienardSystem {
  OddPiecewiseCurve F;
  RestoringFunction g;
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  // Steps snap to segment joints, so the cap only limits the smooth-piece
  // step; at the default tolerance the controller picks ~1e-2 steps anyway.
  double max_step = 0.5;
  double max_time = 1e3;
  double event_tol = 1e-12;
  // States beyond this magnitude are classified as escaping to infinity. A
  // tail with |F| ~ m|x|, m > 2, carries orbits outside the outermost cycle
  // off to infinity without further axis crossings.
  double escape_bound = 1e6;
};

enum class TerminalEvent { NegYAxisCrossing, MaxTime, MaxSteps, Escaped };

struct TraceSample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct OrbitTrace {
  std::vector<TraceSample> samples;  // accepted steps, when recording
  TerminalEvent terminal = TerminalEvent::MaxTime;
  double t_end = 0.0;
  double x_end = 0.0;
  double y_end = 0.0;
};

// v(x, y) = G(x) + y^2 / 2; its change along an orbit equals the path
// integral of F dy.
double potential_v(const LienardSystem& system, double x, double y);

// Integrates forward from (x0, y0) until max_time. Raises StepUnderflow when
// the controller collapses the step.
OrbitTrace flow(const LienardSystem& system, double x0, double y0,
                const IntegratorConfig& config, bool record);

struct HalfTurnResult {
  double p = 0.0;            // |y| at the first negative-y-axis crossing
  double alpha_cross = 0.0;  // positive x where the path crosses y = 0
  double amplitude = 0.0;    // max x along the half-turn
  double f_dy = 0.0;         // integral of F dy accumulated along the path
  double duration = 0.0;
  OrbitTrace trace;
};

// Integrates from (0, y0), y0 > 0, through the right half-plane to the first
// crossing of the negative y-axis; the crossing is localized by bisecting the
// sign change of x(t) to event_tol. Raises NoReturn when max_time is reached
// first. By oddness of F and g the orbit is closed iff the returned p == y0.
HalfTurnResult half_turn(const LienardSystem& system, double y0,
                         const IntegratorConfig& config, bool record = false);

double half_return(const LienardSystem& system, double y0,
                   const IntegratorConfig& config);

struct AxisCrossing {
  double t = 0.0;
  double y = 0.0;  // signed y at the x = 0 crossing
};

struct TurnsResult {
  OrbitTrace trace;
  std::vector<AxisCrossing> crossings;  // alternating negative/positive y
};

// Runs `turns` full returns (2*turns crossings of the y-axis).
TurnsResult run_turns(const LienardSystem& system, double y0, int turns,
                      const IntegratorConfig& config, bool record = true);

}  // namespace lienard
