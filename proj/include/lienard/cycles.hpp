#pragma once

#include <string>
#include <vector>

#include "lienard/dynamics.hpp"

namespace lienard {

enum class Stability { Stable, Unstable, Neutral };

const char* to_string(Stability s);

// A located closed orbit. y0 is the fixed point of the half-return map P;
// alpha_cross the positive x-axis crossing; amplitude the maximum x reached.
struct LimitCycle {
  int index = 0;  // innermost = 1
  double y0 = 0.0;
  double alpha_cross = 0.0;
  double amplitude = 0.0;
  Stability stability = Stability::Neutral;
  double residual = 0.0;  // |P(y0) - y0|
  double p_prime = 0.0;   // finite-difference slope of P at y0
};

// Largest root of 2 G(alpha) + F(alpha)^2 = y0^2 inside an interval; the
// efficient upper estimate of a cycle's x-axis crossing.
struct AmplitudeBound {
  int interval_index = 0;
  double value = 0.0;
  double residual = 0.0;
};

struct ScanOptions {
  double y_max = 0.0;  // <= 0: derive from the outermost zero and G
  int grid = 200;
};

struct CycleScan {
  std::vector<LimitCycle> cycles;
  std::vector<std::string> notes;
  double y_max = 0.0;
};

// Default scan ceiling: the positive root of 2 G(y) = (1.5 a_N)^2, i.e. the
// potential level through 1.5 times the outermost zero.
double default_y_max(const LienardSystem& system);

// Scans delta(y0) = P(y0) - y0 on a uniform grid over (1e-3, y_max], brackets
// every sign change and bisects to |delta| < 1e-10. Raises ScanTooCoarse when
// a refinement pass finds two cycles inside one grid cell; NoReturn
// propagates from the integrator. A near-zero delta across the whole grid is
// reported as a degenerate continuum note with no cycles.
CycleScan find_cycles(const LienardSystem& system, const ScanOptions& scan,
                      const IntegratorConfig& config);

// Raises NoRootInInterval when 2G + F^2 - y0^2 has no root in (a_lo, a_hi).
AmplitudeBound amplitude_bound(const LienardSystem& system, double y0,
                               double a_lo, double a_hi);

// Central finite difference of P with step 1e-5 * y0; Neutral within 1e-3 of
// slope one flags a possibly non-simple cycle.
Stability classify_stability(const LienardSystem& system, double y0,
                             const IntegratorConfig& config,
                             double* p_prime = nullptr);

struct ConditionResult {
  bool pass = false;
  std::string detail;
};

// Verification of the exactly-N-cycles hypotheses plus the localization claim
// (cycle i crosses the x-axis in (abar_{i-1}, abar_i], abar_0 = L_0).
struct TheoremReport {
  std::vector<double> zeros;              // a_1 < ... < a_N
  std::vector<Extremum> extrema;          // all interior extrema of F
  std::vector<double> levels;             // L_0 ... L_{N-1}
  std::vector<AmplitudeBound> alpha_bars; // indices 1 .. N-1
  ConditionResult condition_i;
  ConditionResult condition_ii;
  ConditionResult condition_iii;
  ConditionResult condition_iv;
  ConditionResult localization;
  int expected_cycles = 0;
  CycleScan scan;
  bool pass = false;
};

// Two-phase: cycles are located first, then each alpha-bar is solved from the
// i-th cycle's y0 in (a_i, a_{i+1}).
TheoremReport check_theorem(const LienardSystem& system,
                            const ScanOptions& scan,
                            const IntegratorConfig& config);

}  // namespace lienard
