#include "lienard/curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lienard/errors.hpp"

namespace lienard {

namespace {

constexpr double kVerticalArg = 1e-12;   // root argument below this is vertical
constexpr double kNearVerticalArg = 1e-6;
constexpr double kJoinTol = 1e-12;       // structural gap/overlap tolerance

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

double ArcSegment::root_argument(double x) const {
  const double u = (x - x0) / b;
  return 1.0 - u * u;
}

double ArcSegment::value(double x) const {
  const double arg = root_argument(x);
  return c + r * std::sqrt(arg > 0.0 ? arg : 0.0);
}

double ArcSegment::slope(double x) const {
  const double arg = root_argument(x);
  if (arg < kVerticalArg)
    raise("VerticalTangent",
          "arc slope undefined at x = " + fmt(x) + " (root argument " +
              fmt(arg) + ")");
  return -r * (x - x0) / (b * b * std::sqrt(arg));
}

double segment_lo(const Segment& s) {
  return std::visit([](const auto& seg) { return seg.x_lo; }, s);
}

double segment_hi(const Segment& s) {
  return std::visit([](const auto& seg) { return seg.x_hi; }, s);
}

double segment_value(const Segment& s, double x) {
  return std::visit([x](const auto& seg) { return seg.value(x); }, s);
}

double segment_slope(const Segment& s, double x) {
  if (const auto* arc = std::get_if<ArcSegment>(&s)) return arc->slope(x);
  return std::get<LinearSegment>(s).slope;
}

namespace {

// Shift the vertical offset so that value(x_lo) lands exactly on `target`.
void pin_left_value(Segment& s, double target) {
  if (auto* arc = std::get_if<ArcSegment>(&s)) {
    const double arg = arc->root_argument(arc->x_lo);
    arc->c = target - arc->r * std::sqrt(arg > 0.0 ? arg : 0.0);
  } else {
    auto& lin = std::get<LinearSegment>(s);
    lin.anchor_y = target + lin.slope * (lin.anchor_x - lin.x_lo);
  }
}

void resolve_offsets(std::vector<Segment>& segments) {
  double carry = 0.0;  // F(0) = 0
  for (auto& s : segments) {
    pin_left_value(s, carry);
    if (std::isfinite(segment_hi(s))) carry = segment_value(s, segment_hi(s));
  }
}

}  // namespace

ValidationReport validate_segments(const std::vector<Segment>& segments,
                                   const CurveOptions& options) {
  ValidationReport rep;
  if (segments.empty()) {
    rep.failures.push_back("no segments");
    return rep;
  }

  // Per-segment structure.
  for (size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    const double lo = segment_lo(s);
    const double hi = segment_hi(s);
    if (!(lo < hi)) {
      rep.failures.push_back("segment " + std::to_string(i) +
                             ": x_lo >= x_hi");
      continue;
    }
    if (const auto* arc = std::get_if<ArcSegment>(&s)) {
      if (!(arc->b > 0.0))
        rep.failures.push_back("segment " + std::to_string(i) + ": b <= 0");
      else if (arc->r == 0.0)
        rep.failures.push_back("segment " + std::to_string(i) +
                               ": arc with r = 0 (use a linear segment)");
      else if (!std::isfinite(hi)) {
        rep.failures.push_back("segment " + std::to_string(i) +
                               ": arc cannot extend to infinity");
      } else {
        const double a_lo = arc->root_argument(lo);
        const double a_hi = arc->root_argument(hi);
        if (a_lo < -kJoinTol || a_hi < -kJoinTol) {
          rep.failures.push_back("segment " + std::to_string(i) +
                                 ": span leaves |x - x0| <= b");
        } else {
          if (a_lo < kNearVerticalArg)
            rep.warnings.push_back("segment " + std::to_string(i) +
                                   ": near-vertical tangent at x_lo = " +
                                   fmt(lo));
          if (a_hi < kNearVerticalArg)
            rep.warnings.push_back("segment " + std::to_string(i) +
                                   ": near-vertical tangent at x_hi = " +
                                   fmt(hi));
        }
      }
    }
  }
  if (!rep.failures.empty()) return rep;

  // Coverage of [0, x_end] without gaps or overlaps.
  if (std::abs(segment_lo(segments.front())) > kJoinTol) {
    rep.coverage_ok = false;
    rep.failures.push_back("first segment starts at " +
                           fmt(segment_lo(segments.front())) + ", expected 0");
  }
  for (size_t i = 0; i + 1 < segments.size(); ++i) {
    const double hi = segment_hi(segments[i]);
    const double lo = segment_lo(segments[i + 1]);
    if (!std::isfinite(hi) || std::abs(hi - lo) > kJoinTol) {
      rep.coverage_ok = false;
      rep.failures.push_back("gap or overlap between segments " +
                             std::to_string(i) + " and " +
                             std::to_string(i + 1) + " (" + fmt(hi) + " vs " +
                             fmt(lo) + ")");
    }
  }
  rep.complete = !std::isfinite(segment_hi(segments.back()));
  if (options.require_complete && !rep.complete)
    rep.failures.push_back("last segment must reach +inf");
  if (!rep.coverage_ok) return rep;

  rep.f0_residual = std::abs(segment_value(segments.front(), 0.0));

  for (size_t i = 0; i + 1 < segments.size(); ++i) {
    JointCheck jc;
    jc.x = segment_hi(segments[i]);
    jc.value_residual = std::abs(segment_value(segments[i], jc.x) -
                                 segment_value(segments[i + 1], jc.x));
    try {
      jc.slope_residual = std::abs(segment_slope(segments[i], jc.x) -
                                   segment_slope(segments[i + 1], jc.x));
    } catch (const Error&) {
      jc.slope_residual = kInf;
    }
    rep.max_value_residual = std::max(rep.max_value_residual,
                                      jc.value_residual);
    rep.max_slope_residual = std::max(rep.max_slope_residual,
                                      jc.slope_residual);
    rep.joints.push_back(jc);
  }
  return rep;
}

OddPiecewiseCurve::OddPiecewiseCurve(std::vector<Segment> segments,
                                     CurveOptions options)
    : segments_(std::move(segments)), options_(options) {
  if (options_.resolve_offsets) {
    // Offsets are only solvable once the structure is sound.
    ValidationReport pre = validate_segments(segments_, options_);
    if (!pre.structurally_ok())
      raise("InvalidCurve", pre.failures.front());
    lienard::resolve_offsets(segments_);
  }
  report_ = validate_segments(segments_, options_);
  if (!report_.structurally_ok())
    raise("InvalidCurve", report_.failures.front());
  if (!report_.rounded_ok())
    raise("InvalidCurve",
          "joint residuals too large (F(0) residual " +
              fmt(report_.f0_residual) + ", max joint residual " +
              fmt(report_.max_value_residual) + ")");
  if (options_.declared_c1 && report_.max_slope_residual >= 1e-6)
    raise("InvalidCurve", "declared C1 but max slope residual is " +
                              fmt(report_.max_slope_residual));
}

const Segment& OddPiecewiseCurve::segment_at(double x) const {
  for (const auto& s : segments_)
    if (x <= segment_hi(s)) return s;
  raise("OutOfDomain", "x = " + fmt(x) + " beyond curve domain end " +
                           fmt(domain_end()));
}

double OddPiecewiseCurve::value(double x) const {
  if (x < 0.0) return -value(-x);
  return segment_value(segment_at(x), x);
}

double OddPiecewiseCurve::derivative(double x) const {
  if (x < 0.0) return derivative(-x);  // odd F has an even derivative
  return segment_slope(segment_at(x), x);
}

double OddPiecewiseCurve::domain_end() const {
  return segments_.empty() ? 0.0 : segment_hi(segments_.back());
}

double OddPiecewiseCurve::end_slope() const {
  const double end = domain_end();
  if (!std::isfinite(end))
    raise("OutOfDomain", "end_slope requires a finite domain end");
  return segment_slope(segments_.back(), end);
}

std::vector<double> OddPiecewiseCurve::positive_zeros() const {
  std::vector<double> roots;
  for (const auto& s : segments_) {
    const double lo = segment_lo(s);
    const double hi = segment_hi(s);
    const double span = std::isfinite(hi) ? hi - lo : 1.0;
    const double edge = 1e-12 * std::max(1.0, std::abs(lo) + span);
    if (const auto* arc = std::get_if<ArcSegment>(&s)) {
      const double q = -arc->c / arc->r;  // sqrt term at a zero
      if (q < 0.0 || q > 1.0) continue;
      const double u = std::sqrt(std::max(0.0, 1.0 - q * q));
      for (double cand : {arc->x0 - arc->b * u, arc->x0 + arc->b * u}) {
        if (cand >= lo - edge && cand <= hi + edge) roots.push_back(cand);
        if (u == 0.0) break;  // tangential zero, single candidate
      }
    } else {
      const auto& lin = std::get<LinearSegment>(s);
      if (lin.slope == 0.0) {
        if (lin.anchor_y == 0.0)
          raise("NonSimpleZero", "segment is identically zero on [" +
                                     fmt(lo) + ", " + fmt(hi) + ")");
        continue;
      }
      const double cand = lin.anchor_x - lin.anchor_y / lin.slope;
      if (cand >= lo - edge && (cand <= hi + edge)) roots.push_back(cand);
    }
  }

  std::sort(roots.begin(), roots.end());
  // Drop x <= 0 and collapse duplicates produced by shared joints.
  std::vector<double> zeros;
  for (double rt : roots) {
    if (rt <= 1e-9) continue;
    if (!zeros.empty() && rt - zeros.back() < 1e-7) continue;
    zeros.push_back(rt);
  }

  // Simplicity: F must change sign across each zero.
  for (size_t i = 0; i < zeros.size(); ++i) {
    const double a = zeros[i];
    const double left_gap = (i == 0) ? a : a - zeros[i - 1];
    const double right_gap =
        (i + 1 < zeros.size()) ? zeros[i + 1] - a : std::max(1.0, a);
    double delta = 1e-9 * std::max(1.0, a);
    const double delta_max = 0.25 * std::min(left_gap, right_gap);
    double lv = 0.0, rv = 0.0;
    while (delta <= delta_max) {
      lv = value(a - delta);
      rv = value(a + delta);
      if (std::abs(lv) > 1e-13 && std::abs(rv) > 1e-13) break;
      delta *= 4.0;
    }
    if (std::abs(lv) <= 1e-13 || std::abs(rv) <= 1e-13 ||
        std::signbit(lv) == std::signbit(rv))
      raise("NonSimpleZero",
            "F touches zero without sign change at x = " + fmt(a));
  }
  return zeros;
}

std::vector<Extremum> OddPiecewiseCurve::extrema() const {
  std::vector<Extremum> out;
  const double end = domain_end();
  for (const auto& s : segments_) {
    const auto* arc = std::get_if<ArcSegment>(&s);
    if (arc && arc->x0 > arc->x_lo && arc->x0 < arc->x_hi && arc->x0 > 0.0)
      out.push_back({arc->x0, arc->c + arc->r});
  }
  // Joints where the slope changes sign. Probe slightly inside each side:
  // mirror-image arcs meet with slope exactly 0 at the joint itself.
  for (size_t i = 0; i + 1 < segments_.size(); ++i) {
    const double xj = segment_hi(segments_[i]);
    if (xj <= 0.0 || xj >= end) continue;
    const double wl = xj - segment_lo(segments_[i]);
    const double hr = segment_hi(segments_[i + 1]);
    const double wr = (std::isfinite(hr) ? hr : xj + 1.0) - xj;
    const double h = 1e-6 * std::min(wl, wr);
    double dl, dr;
    try {
      dl = segment_slope(segments_[i], xj - h);
      dr = segment_slope(segments_[i + 1], xj + h);
    } catch (const Error&) {
      continue;  // vertical tangent adjacent to the joint
    }
    if (dl * dr < 0.0) out.push_back({xj, value(xj)});
  }
  std::sort(out.begin(), out.end(),
            [](const Extremum& a, const Extremum& b) { return a.x < b.x; });
  return out;
}

RestoringFunction::RestoringFunction(
    std::vector<std::pair<int, double>> terms)
    : terms_(std::move(terms)) {
  bool has_positive = false;
  for (const auto& [e, coef] : terms_) {
    if (e < 1 || e % 2 == 0)
      raise("InvalidRestoring",
            "exponent " + std::to_string(e) + " must be odd and positive");
    if (coef < 0.0)
      raise("InvalidRestoring", "coefficient for x^" + std::to_string(e) +
                                    " must be nonnegative");
    if (coef > 0.0) has_positive = true;
  }
  if (!has_positive)
    raise("InvalidRestoring", "at least one coefficient must be positive");
}

double RestoringFunction::operator()(double x) const {
  double sum = 0.0;
  for (const auto& [e, coef] : terms_) {
    double p = x;
    for (int k = 1; k < e; ++k) p *= x;
    sum += coef * p;
  }
  return sum;
}

double RestoringFunction::antiderivative(double x) const {
  double sum = 0.0;
  for (const auto& [e, coef] : terms_) {
    double p = x * x;
    for (int k = 1; k < e; ++k) p *= x;
    sum += coef * p / (e + 1);
  }
  return sum;
}

bool RestoringFunction::is_identity() const {
  return terms_.size() == 1 && terms_[0].first == 1 &&
         terms_[0].second == 1.0;
}

}  // namespace lienard
