#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lienard/curves.hpp"

namespace lienard {

// Abscissa map phi(s) = sqrt(A s^2 + B), strictly increasing on [s_lo, s_hi].
struct PhiMap {
  double A = 1.0;
  double B = 0.0;
  double s_lo = 0.0;
  double s_hi = 0.0;

  double operator()(double s) const;
  double slope(double s) const;
};

// Solves phi(s_lo) = t_lo, phi(s_hi) = t_hi within the two-parameter family.
// Raises DegenerateInterval when s_lo == s_hi and NonMonotone when the solved
// map is not strictly increasing on the interval.
PhiMap build_phi(double s_lo, double s_hi, double t_lo, double t_hi);

// One outward extension: source interval [a_prev, a_cur] with extremum at
// L_prev, target interval [a_cur, a_next] with extremum at L_next. The target
// shape pieces are authoritative; phi_L/phi_R carry the abscissas across and
// the induced ordinate map H is sampled from them for validation.
struct ExtensionStep {
  double a_prev = 0.0;
  double L_prev = 0.0;
  double a_cur = 0.0;
  double L_next = 0.0;
  double a_next = 0.0;
  PhiMap phi_L;
  PhiMap phi_R;
  std::vector<Segment> target_left;   // covers [a_cur, L_next]
  std::vector<Segment> target_right;  // covers [L_next, a_next]
};

// Sampled parametric graph of H: f_k(s) -> f_{k+1}(phi(s)), split into the
// left branch (s in [a_prev, L_prev]) and right branch (s in [L_prev, a_cur]).
struct InducedH {
  struct Branch {
    std::vector<double> s;
    std::vector<double> u;  // f_k(s)
    std::vector<double> h;  // f_{k+1}(phi(s))
    bool monotone_decreasing = false;
    bool sign_ok = false;  // u * h < 0 away from the endpoints
  };
  Branch left;
  Branch right;
  double h_at_zero = 0.0;  // |H(0)|
};

struct StepResult {
  ExtensionStep step;
  InducedH induced;
  double joint_residual = 0.0;  // |f_{k+1}(a_cur)| before offsets are pinned
  double slope_residual = 0.0;  // C1 mismatch at a_cur (reported only)
};

// Appends the target pieces of `step` to `current` (a partial curve ending at
// a_cur) and validates the construction. Raises JointMismatch, SignViolation,
// HNotMonotone, or InvalidPlan.
std::pair<OddPiecewiseCurve, InducedH> extend_once(
    const OddPiecewiseCurve& current, const ExtensionStep& step);

// Closes a partial curve ending at its last zero a_N with a linear tail
// through (a_N, 0). `slope` empty means C1 continuation (left slope at a_N).
// Raises ZeroSlope when that slope is below 1e-9 in magnitude, SignViolation
// when a manual slope points back across zero.
OddPiecewiseCurve append_tail(const OddPiecewiseCurve& curve,
                              std::optional<double> slope);

// Serializable plan: the inner restriction f1 on [0, a_1], per-step targets,
// and the tail slope. Phi maps left empty are solved from the interval
// endpoints.
struct StepSpec {
  double a_next = 0.0;
  double L_next = 0.0;
  std::optional<PhiMap> phi_L;  // empty -> build_phi from endpoints
  std::optional<PhiMap> phi_R;
  std::vector<Segment> target_left;
  std::vector<Segment> target_right;
};

struct ExtensionPlan {
  OddPiecewiseCurve f1;  // partial, [0, a_1]
  RestoringFunction g;
  std::vector<StepSpec> steps;
  std::optional<double> tail_slope;  // empty -> C1 continuation
};

struct BuiltExtension {
  OddPiecewiseCurve curve;  // complete on [0, inf)
  RestoringFunction g;
  std::vector<StepResult> steps;
  std::vector<double> zeros;    // a_0 = 0, a_1, ..., a_N
  std::vector<double> extrema;  // L_0, ..., L_{N-1}
  double tail_slope = 0.0;
};

BuiltExtension build_extension(const ExtensionPlan& plan);

// Diagnostic for the choice-function condition of the first left branch:
// compares |F(phi_1L(s))| against |F(s)| on [0, L_0].
struct OdaniReport {
  struct PhiCheck {
    int step = 0;
    char side = 'L';
    double A = 0.0;
    double B = 0.0;
    bool A_ge_1 = false;
  };
  struct SignSpan {
    double from = 0.0;
    double to = 0.0;
    int sign = 0;  // -1: |H(f)| < |f|, +1: |H(f)| > |f|
  };
  bool g_is_identity = false;
  std::vector<PhiCheck> phi_checks;
  std::vector<double> equality_loci;  // includes endpoints where |d| ~ 0
  std::vector<SignSpan> sign_pattern;
  bool equality_everywhere = false;
  std::string verdict;  // "holds" | "fails" | "holds_piecewise"
};

OdaniReport odani_check(const BuiltExtension& built);

}  // namespace lienard
