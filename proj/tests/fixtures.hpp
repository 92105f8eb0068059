#pragma once

#include <cmath>
#include <string>

#include "lienard/io.hpp"

namespace fixtures {

using namespace lienard;

inline std::string path(const std::string& name) {
  return std::string(LIENARD_FIXTURE_DIR) + "/" + name;
}

inline LienardSystem load_system(const std::string& name) {
  return system_from_json(read_json_file(path(name)));
}

inline ExtensionPlan load_plan(const std::string& name) {
  return plan_from_json(read_json_file(path(name)));
}

// F identically zero with g(x) = x: the conservative reference case.
inline LienardSystem conservative() {
  return {OddPiecewiseCurve({LinearSegment{0.0, kInf, 0.0, 0.0, 0.0}}),
          RestoringFunction()};
}

// A plan whose extension is the exact ordinate reflection of f1 through the
// solved phi maps, so the induced H is H(u) = -u. Both pieces of f1 are arcs
// centered at x = 0 (resp. at 0 for the right one), which is what makes the
// reflected targets representable as arcs again: for phi = sqrt(A s^2 + B)
// and a zero-centered arc of semi-axes (b, r), the image is the zero-centered
// arc with beta = sqrt(A b^2 + B), r' = -r * beta / (sqrt(A) b).
inline ExtensionPlan reflection_plan() {
  const double L0 = 0.1, a1 = 0.2, L1 = 0.35, a2 = 0.5;
  const double b1 = 0.25, r1 = 0.25;
  ArcSegment f1L{0.0, L0, 0.0, -r1, r1, b1};

  const double bR = 0.4;
  const double sa = std::sqrt(1.0 - (a1 / bR) * (a1 / bR));
  const double sL = std::sqrt(1.0 - (L0 / bR) * (L0 / bR));
  const double rho = f1L.value(L0) / (sa - sL);  // continuity at L0
  ArcSegment f1R{L0, a1, 0.0, rho * sa, -rho, bR};

  const auto mirror = [](const ArcSegment& src, double A, double B,
                         double lo, double hi) {
    const double beta = std::sqrt(A * src.b * src.b + B);
    return ArcSegment{lo, hi, 0.0, -src.c,
                      -src.r * beta / (std::sqrt(A) * src.b), beta};
  };
  const PhiMap phiL = build_phi(0.0, L0, a1, L1);
  const PhiMap phiR = build_phi(L0, a1, L1, a2);

  StepSpec step;
  step.a_next = a2;
  step.L_next = L1;
  step.target_left = {mirror(f1L, phiL.A, phiL.B, a1, L1)};
  step.target_right = {mirror(f1R, phiR.A, phiR.B, L1, a2)};

  ExtensionPlan plan{OddPiecewiseCurve({f1L, f1R},
                                       {false, false, false}),
                     RestoringFunction(), {step}, std::nullopt};
  return plan;
}

}  // namespace fixtures
