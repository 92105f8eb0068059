#include "lienard/construction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lienard/errors.hpp"

namespace lienard {

namespace {

constexpr int kBranchSamples = 512;
constexpr double kEndpointTol = 1e-12;  // built phi endpoint residual
constexpr double kManualPhiTol = 1e-6;  // user-supplied phi endpoint residual
constexpr double kZeroTol = 1e-4;       // printed constants are rounded

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double span_value(const std::vector<Segment>& segs, double x) {
  for (const auto& s : segs)
    if (x <= segment_hi(s)) return segment_value(s, x);
  return segment_value(segs.back(), x);
}

// Target pieces must tile [lo, hi] in order.
void check_target_span(const std::vector<Segment>& segs, double lo, double hi,
                       const char* label) {
  if (segs.empty()) raise("InvalidPlan", std::string(label) + " is empty");
  if (std::abs(segment_lo(segs.front()) - lo) > 1e-9 ||
      std::abs(segment_hi(segs.back()) - hi) > 1e-9)
    raise("InvalidPlan", std::string(label) + " must cover [" + fmt(lo) +
                             ", " + fmt(hi) + "]");
  for (size_t i = 0; i + 1 < segs.size(); ++i)
    if (std::abs(segment_hi(segs[i]) - segment_lo(segs[i + 1])) > 1e-9)
      raise("InvalidPlan", std::string(label) + " has a gap at " +
                               fmt(segment_hi(segs[i])));
}

// u comes from the source restriction, h from the already-appended (and
// possibly offset-resolved) extension, so H(0) = 0 holds to roundoff even
// when the raw target constants carry printing error.
InducedH::Branch sample_branch(const OddPiecewiseCurve& source,
                               const OddPiecewiseCurve& extended,
                               const PhiMap& phi) {
  InducedH::Branch br;
  br.s.reserve(kBranchSamples + 1);
  for (int i = 0; i <= kBranchSamples; ++i) {
    const double s =
        phi.s_lo + (phi.s_hi - phi.s_lo) * i / double(kBranchSamples);
    br.s.push_back(s);
    br.u.push_back(source(s));
    br.h.push_back(extended(std::min(phi(s), extended.domain_end())));
  }

  br.monotone_decreasing = true;
  for (int i = 0; i < kBranchSamples; ++i) {
    const double du = br.u[i + 1] - br.u[i];
    const double dh = br.h[i + 1] - br.h[i];
    if (std::abs(du) < 1e-14 || std::abs(dh) < 1e-14) continue;
    if (du * dh > 0.0) {
      br.monotone_decreasing = false;
      break;
    }
  }

  br.sign_ok = true;
  for (int i = 1; i < kBranchSamples; ++i) {
    if (std::abs(br.u[i]) < 1e-7 || std::abs(br.h[i]) < 1e-7) continue;
    if (br.u[i] * br.h[i] >= 0.0) {
      br.sign_ok = false;
      break;
    }
  }
  return br;
}

}  // namespace

double PhiMap::operator()(double s) const {
  return std::sqrt(A * s * s + B);
}

double PhiMap::slope(double s) const {
  const double t = (*this)(s);
  if (t <= 0.0) raise("NonMonotone", "phi slope undefined at s = 0 with B = 0");
  return A * s / t;
}

PhiMap build_phi(double s_lo, double s_hi, double t_lo, double t_hi) {
  if (s_lo == s_hi)
    raise("DegenerateInterval", "source interval [" + fmt(s_lo) + ", " +
                                    fmt(s_hi) + "] has zero length");
  if (s_lo < 0.0 || s_hi < s_lo)
    raise("DegenerateInterval",
          "source interval must satisfy 0 <= s_lo < s_hi");
  PhiMap phi;
  phi.s_lo = s_lo;
  phi.s_hi = s_hi;
  phi.A = (t_hi * t_hi - t_lo * t_lo) / (s_hi * s_hi - s_lo * s_lo);
  phi.B = t_lo * t_lo - phi.A * s_lo * s_lo;
  if (phi.A <= 0.0)
    raise("NonMonotone", "solved A = " + fmt(phi.A) +
                             " <= 0; map is not increasing on the interval");
  // A s^2 + B equals t_lo^2 >= 0 at s_lo and grows with s; a tiny negative B
  // from cancellation at s_lo = 0 is clamped.
  if (phi.B < 0.0 && s_lo == 0.0) phi.B = 0.0;
  if (std::abs(phi(s_lo) - t_lo) > kEndpointTol * std::max(1.0, t_lo) ||
      std::abs(phi(s_hi) - t_hi) > kEndpointTol * std::max(1.0, t_hi))
    raise("NonMonotone", "endpoint solve failed for phi");
  return phi;
}

std::pair<OddPiecewiseCurve, InducedH> extend_once(
    const OddPiecewiseCurve& current, const ExtensionStep& step) {
  if (!(step.a_prev < step.L_prev && step.L_prev < step.a_cur &&
        step.a_cur < step.L_next && step.L_next < step.a_next))
    raise("InvalidPlan",
          "step intervals must satisfy a_prev < L_prev < a_cur < L_next < "
          "a_next (got " +
              fmt(step.a_prev) + ", " + fmt(step.L_prev) + ", " +
              fmt(step.a_cur) + ", " + fmt(step.L_next) + ", " +
              fmt(step.a_next) + ")");
  if (current.complete())
    raise("InvalidPlan", "cannot extend a curve that already reaches +inf");
  if (std::abs(current.domain_end() - step.a_cur) > 1e-9)
    raise("InvalidPlan", "curve ends at " + fmt(current.domain_end()) +
                             " but the step expects a_cur = " +
                             fmt(step.a_cur));
  if (std::abs(current(step.a_cur)) > kZeroTol)
    raise("JointMismatch", "F(a_cur) = " + fmt(current(step.a_cur)) +
                               " is not a zero of the source curve");

  // Phi maps must realize the declared endpoint convention.
  const auto check_phi = [](const PhiMap& phi, double s0, double s1,
                            double t0, double t1, const char* name) {
    if (std::abs(phi.s_lo - s0) > 1e-9 || std::abs(phi.s_hi - s1) > 1e-9)
      raise("InvalidPlan", std::string(name) + " source interval mismatch");
    if (std::abs(phi(s0) - t0) > kManualPhiTol ||
        std::abs(phi(s1) - t1) > kManualPhiTol)
      raise("InvalidPlan", std::string(name) + " does not map [" + fmt(s0) +
                               ", " + fmt(s1) + "] onto [" + fmt(t0) + ", " +
                               fmt(t1) + "]");
  };
  check_phi(step.phi_L, step.a_prev, step.L_prev, step.a_cur, step.L_next,
            "phi_L");
  check_phi(step.phi_R, step.L_prev, step.a_cur, step.L_next, step.a_next,
            "phi_R");

  check_target_span(step.target_left, step.a_cur, step.L_next, "target_left");
  check_target_span(step.target_right, step.L_next, step.a_next,
                    "target_right");

  const double left_end = span_value(step.target_left, step.a_cur);
  const double right_end = span_value(step.target_right, step.a_next);
  if (std::abs(left_end) > kZeroTol)
    raise("JointMismatch",
          "target value at a_cur is " + fmt(left_end) + ", expected 0");
  if (std::abs(right_end) > kZeroTol)
    raise("JointMismatch",
          "target value at a_next is " + fmt(right_end) + ", expected 0");
  const double mid_l = span_value(step.target_left, step.L_next);
  const double mid_r = span_value(step.target_right, step.L_next);
  if (std::abs(mid_l - mid_r) > kZeroTol)
    raise("JointMismatch", "target pieces disagree at L_next: " + fmt(mid_l) +
                               " vs " + fmt(mid_r));

  // The new piece must take the sign opposite to the source piece.
  const double source_sign =
      current(0.5 * (step.a_prev + step.L_prev)) < 0.0 ? -1.0 : 1.0;
  const auto check_sign = [&](const std::vector<Segment>& segs, double lo,
                              double hi) {
    for (int i = 0; i <= 256; ++i) {
      const double x = lo + (hi - lo) * i / 256.0;
      const double v = span_value(segs, x);
      if (source_sign * v > kZeroTol)
        raise("SignViolation",
              "extension has the same sign as the source piece at x = " +
                  fmt(x) + " (value " + fmt(v) + ")");
    }
  };
  check_sign(step.target_left, step.a_cur, step.L_next);
  check_sign(step.target_right, step.L_next, step.a_next);

  std::vector<Segment> segs = current.segments();
  segs.insert(segs.end(), step.target_left.begin(), step.target_left.end());
  segs.insert(segs.end(), step.target_right.begin(), step.target_right.end());
  CurveOptions opts = current.options();
  opts.require_complete = false;
  OddPiecewiseCurve extended(std::move(segs), opts);

  InducedH induced;
  induced.left = sample_branch(current, extended, step.phi_L);
  induced.right = sample_branch(current, extended, step.phi_R);
  induced.h_at_zero = std::abs(induced.left.h.front());
  if (!induced.left.monotone_decreasing || !induced.right.monotone_decreasing)
    raise("HNotMonotone",
          "induced H is not monotone decreasing between 0 and f(L_prev)");
  if (!induced.left.sign_ok || !induced.right.sign_ok)
    raise("SignViolation", "induced H violates u * H(u) < 0");
  if (induced.h_at_zero > kZeroTol)
    raise("JointMismatch",
          "|H(0)| = " + fmt(induced.h_at_zero) + " but H(0) = 0 is required");

  return {std::move(extended), std::move(induced)};
}

OddPiecewiseCurve append_tail(const OddPiecewiseCurve& curve,
                              std::optional<double> slope) {
  if (curve.complete())
    raise("InvalidPlan", "curve already reaches +inf");
  const double a_n = curve.domain_end();
  if (std::abs(curve(a_n)) > kZeroTol)
    raise("JointMismatch",
          "curve must end at a zero; F(" + fmt(a_n) + ") = " + fmt(curve(a_n)));

  const double left = curve.end_slope();
  double m;
  if (slope.has_value()) {
    m = *slope;
    if (std::abs(m) < 1e-9)
      raise("ZeroSlope", "tail slope " + fmt(m) + " cannot drive |F| to inf");
    if (std::abs(left) > 1e-9 && m * left < 0.0)
      raise("SignViolation",
            "tail slope " + fmt(m) + " turns back across the zero at " +
                fmt(a_n) + " (left slope " + fmt(left) + ")");
  } else {
    m = left;
    if (std::abs(m) < 1e-9)
      raise("ZeroSlope", "left slope at " + fmt(a_n) +
                             " is " + fmt(m) + "; pass an explicit slope");
  }

  std::vector<Segment> segs = curve.segments();
  segs.push_back(LinearSegment{a_n, kInf, m, a_n, 0.0});
  CurveOptions opts = curve.options();
  opts.require_complete = true;
  return OddPiecewiseCurve(std::move(segs), opts);
}

BuiltExtension build_extension(const ExtensionPlan& plan) {
  BuiltExtension built{plan.f1, plan.g, {}, {}, {}, 0.0};
  if (built.curve.complete())
    raise("InvalidPlan", "f1 must be a partial curve ending at a_1");

  built.zeros = {0.0, built.curve.domain_end()};
  const auto f1_ext = built.curve.extrema();
  if (f1_ext.size() != 1)
    raise("InvalidPlan", "f1 must have exactly one interior extremum, found " +
                             std::to_string(f1_ext.size()));
  built.extrema = {f1_ext.front().x};

  int index = 0;
  for (const auto& spec : plan.steps) {
    ++index;
    ExtensionStep step;
    step.a_prev = built.zeros[built.zeros.size() - 2];
    step.L_prev = built.extrema.back();
    step.a_cur = built.zeros.back();
    step.L_next = spec.L_next;
    step.a_next = spec.a_next;
    try {
      if (!(step.a_cur < step.L_next && step.L_next < step.a_next))
        raise("InvalidPlan",
              "step targets must satisfy a_cur < L_next < a_next (got " +
                  fmt(step.a_cur) + ", " + fmt(step.L_next) + ", " +
                  fmt(step.a_next) + ")");
      if (spec.phi_L) {
        step.phi_L = *spec.phi_L;
        step.phi_L.s_lo = step.a_prev;
        step.phi_L.s_hi = step.L_prev;
      } else {
        step.phi_L =
            build_phi(step.a_prev, step.L_prev, step.a_cur, step.L_next);
      }
      if (spec.phi_R) {
        step.phi_R = *spec.phi_R;
        step.phi_R.s_lo = step.L_prev;
        step.phi_R.s_hi = step.a_cur;
      } else {
        step.phi_R =
            build_phi(step.L_prev, step.a_cur, step.L_next, step.a_next);
      }
      step.target_left = spec.target_left;
      step.target_right = spec.target_right;

      StepResult result;
      result.step = step;
      result.joint_residual = std::abs(span_value(step.target_left,
                                                  step.a_cur));
      auto [extended, induced] = extend_once(built.curve, step);
      try {
        result.slope_residual = std::abs(
            segment_slope(built.curve.segments().back(), step.a_cur) -
            segment_slope(step.target_left.front(), step.a_cur));
      } catch (const Error&) {
        result.slope_residual = kInf;
      }
      result.induced = std::move(induced);
      built.curve = std::move(extended);
      built.steps.push_back(std::move(result));
      built.zeros.push_back(step.a_next);
      built.extrema.push_back(step.L_next);
    } catch (const Error& e) {
      throw Error(e.code(),
                  "step " + std::to_string(index) + ": " + e.what());
    }
  }

  built.curve = append_tail(built.curve, plan.tail_slope);
  built.tail_slope =
      std::get<LinearSegment>(built.curve.segments().back()).slope;
  return built;
}

OdaniReport odani_check(const BuiltExtension& built) {
  if (built.steps.empty())
    raise("InvalidPlan", "odani check needs at least one extension step");

  OdaniReport rep;
  rep.g_is_identity = built.g.is_identity();
  int index = 0;
  for (const auto& sr : built.steps) {
    ++index;
    rep.phi_checks.push_back({index, 'L', sr.step.phi_L.A, sr.step.phi_L.B,
                              sr.step.phi_L.A >= 1.0 - 1e-12});
    rep.phi_checks.push_back({index, 'R', sr.step.phi_R.A, sr.step.phi_R.B,
                              sr.step.phi_R.A >= 1.0 - 1e-12});
  }

  const PhiMap& phi = built.steps.front().step.phi_L;
  const double s_hi = phi.s_hi;  // L_0
  const auto d = [&](double s) {
    return std::abs(built.curve(phi(s))) - std::abs(built.curve(s));
  };

  const int n = kBranchSamples;
  std::vector<double> ds(n + 1);
  double sup = 0.0, max_d = -kInf, min_d = kInf;
  for (int i = 0; i <= n; ++i) {
    const double s = s_hi * i / double(n);
    ds[i] = d(s);
    sup = std::max(sup, std::abs(ds[i]));
    max_d = std::max(max_d, ds[i]);
    min_d = std::min(min_d, ds[i]);
  }

  if (sup < 1e-10) {
    rep.equality_everywhere = true;
    rep.verdict = "holds";
    rep.equality_loci = {0.0, s_hi};
    return rep;
  }

  // Equality loci: the left endpoint (forced by H(0) = 0) plus root-refined
  // interior sign changes. s = L_0 itself is the hand-over to the right
  // branch and is not listed.
  if (std::abs(ds[0]) < 1e-10) rep.equality_loci.push_back(0.0);
  for (int i = 0; i < n; ++i) {
    if (ds[i] == 0.0 && i > 0) {
      rep.equality_loci.push_back(s_hi * i / double(n));
      continue;
    }
    if (ds[i] * ds[i + 1] < 0.0) {
      double lo = s_hi * i / double(n), hi = s_hi * (i + 1) / double(n);
      double flo = ds[i];
      while (hi - lo > 1e-10) {  // refine to well below 1e-8
        const double mid = 0.5 * (lo + hi);
        const double fm = d(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((flo < 0.0) == (fm < 0.0)) { lo = mid; flo = fm; }
        else hi = mid;
      }
      rep.equality_loci.push_back(0.5 * (lo + hi));
    }
  }

  // Sign spans between consecutive loci (interval endpoints included).
  std::vector<double> bounds = rep.equality_loci;
  if (bounds.empty() || bounds.front() > 1e-12) bounds.insert(bounds.begin(), 0.0);
  if (bounds.back() < s_hi - 1e-12) bounds.push_back(s_hi);
  for (size_t i = 0; i + 1 < bounds.size(); ++i) {
    const double mid = 0.5 * (bounds[i] + bounds[i + 1]);
    rep.sign_pattern.push_back(
        {bounds[i], bounds[i + 1], d(mid) > 0.0 ? +1 : -1});
  }

  if (min_d >= -1e-10)
    rep.verdict = "holds";
  else if (max_d <= 1e-10)
    rep.verdict = "fails";
  else
    rep.verdict = "holds_piecewise";
  return rep;
}

}  // namespace lienard
