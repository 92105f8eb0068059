#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lienard {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Elliptic arc piece: y(x) = c + r * sqrt(1 - ((x - x0)/b)^2) on [x_lo, x_hi].
// r is the signed semi-axis along the ordinate, b > 0 the semi-axis along the
// abscissa. The span must satisfy |x - x0| <= b throughout.
struct ArcSegment {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double x0 = 0.0;
  double c = 0.0;
  double r = 0.0;
  double b = 1.0;

  double value(double x) const;
  // Analytic slope; raises VerticalTangent when the root argument < 1e-12.
  double slope(double x) const;
  // 1 - ((x - x0)/b)^2
  double root_argument(double x) const;
};

// y(x) = anchor_y + slope * (x - anchor_x) on [x_lo, x_hi]; x_hi may be +inf.
struct LinearSegment {
  double x_lo = 0.0;
  double x_hi = kInf;
  double slope = 0.0;
  double anchor_x = 0.0;
  double anchor_y = 0.0;

  double value(double x) const { return anchor_y + slope * (x - anchor_x); }
};

using Segment = std::variant<ArcSegment, LinearSegment>;

double segment_lo(const Segment& s);
double segment_hi(const Segment& s);
double segment_value(const Segment& s, double x);
double segment_slope(const Segment& s, double x);

struct JointCheck {
  double x = 0.0;
  double value_residual = 0.0;
  double slope_residual = 0.0;  // inf when a side has a vertical tangent
};

// Structural findings for a segment list. Hard failures (ordering, coverage,
// bad parameters) are listed in `failures`; near-vertical endpoint tangents
// are warnings only.
struct ValidationReport {
  std::vector<JointCheck> joints;
  double f0_residual = 0.0;
  double max_value_residual = 0.0;
  double max_slope_residual = 0.0;
  bool coverage_ok = true;
  bool complete = false;  // last segment reaches +inf
  std::vector<std::string> failures;
  std::vector<std::string> warnings;

  bool structurally_ok() const { return failures.empty(); }
  // Residual gates for analytically specified curves.
  bool strict_ok(bool require_c1) const {
    return structurally_ok() && f0_residual < 1e-12 &&
           max_value_residual < 1e-9 &&
           (!require_c1 || max_slope_residual < 1e-6);
  }
  // Residual gates for curves entered from rounded printed constants.
  bool rounded_ok() const {
    return structurally_ok() && f0_residual < 1e-4 &&
           max_value_residual < 1e-4;
  }
};

struct CurveOptions {
  // Re-solve each segment's vertical offset (arc c / linear anchor_y) left to
  // right so that F(0) = 0 and every joint is exactly continuous. Intended
  // for fixtures whose printed constants are rounded.
  bool resolve_offsets = false;
  // Declares the curve C1; joint slope residuals then gate validation.
  bool declared_c1 = false;
  // Require the last segment to reach +inf.
  bool require_complete = true;
};

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

ValidationReport validate_segments(const std::vector<Segment>& segments,
                                   const CurveOptions& options);

// Odd function on all of R, described by segments covering [0, x_end] (x_end
// may be +inf) and evaluated as -F(-x) for x < 0. Immutable once built; all
// queries are const and safe to call concurrently.
class OddPiecewiseCurve {
 public:
  OddPiecewiseCurve() = default;
  // Validates on construction; raises InvalidCurve when the segment list is
  // structurally broken or residuals exceed the rounded-constant gates.
  explicit OddPiecewiseCurve(std::vector<Segment> segments,
                             CurveOptions options = {});

  double operator()(double x) const { return value(x); }
  double value(double x) const;
  double derivative(double x) const;

  // All positive simple zeros in ascending order, found per segment in closed
  // form. Raises NonSimpleZero when F touches zero without changing sign.
  std::vector<double> positive_zeros() const;

  // Interior local extrema on (0, inf): arc centers inside their span plus
  // joints where the slope changes sign.
  std::vector<Extremum> extrema() const;

  const std::vector<Segment>& segments() const { return segments_; }
  const ValidationReport& validation() const { return report_; }
  const CurveOptions& options() const { return options_; }
  bool complete() const { return report_.complete; }
  double domain_end() const;
  // Left-sided slope at domain_end (partial curves).
  double end_slope() const;

 private:
  const Segment& segment_at(double x) const;

  std::vector<Segment> segments_;
  CurveOptions options_;
  ValidationReport report_;
};

// g(x) = sum of c_k x^{e_k} with odd exponents and nonnegative coefficients,
// at least one positive; hence odd with g(x) > 0 for x > 0. G = antiderivative
// with G(0) = 0 is available in closed form.
class RestoringFunction {
 public:
  RestoringFunction() : RestoringFunction({{1, 1.0}}) {}
  explicit RestoringFunction(std::vector<std::pair<int, double>> terms);

  double operator()(double x) const;
  double antiderivative(double x) const;  // G(x), even, increasing on [0,inf)

  bool is_identity() const;
  const std::vector<std::pair<int, double>>& terms() const { return terms_; }

 private:
  std::vector<std::pair<int, double>> terms_;
};

}  // namespace lienard
