#include "lienard/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lienard/errors.hpp"

namespace lienard {

namespace {

double num_or_inf(const Json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInf;
    raise("ParseError", std::string(key) + " must be a number or \"inf\"");
  }
  return v.get<double>();
}

double require_num(const Json& j, const char* key) {
  if (!j.contains(key))
    raise("ParseError", std::string("missing field \"") + key + "\"");
  return j.at(key).get<double>();
}

std::vector<Segment> segments_from_json(const Json& j) {
  if (!j.is_array()) raise("ParseError", "\"segments\" must be an array");
  std::vector<Segment> out;
  for (const auto& s : j) out.push_back(segment_from_json(s));
  return out;
}

RestoringFunction g_from_json(const Json& j) {
  if (!j.contains("coeffs"))
    raise("ParseError", "\"g\" must contain \"coeffs\"");
  std::vector<std::pair<int, double>> terms;
  for (const auto& pair : j.at("coeffs")) {
    if (!pair.is_array() || pair.size() != 2)
      raise("ParseError", "g coefficients must be [exponent, coefficient]");
    terms.emplace_back(pair.at(0).get<int>(), pair.at(1).get<double>());
  }
  return RestoringFunction(std::move(terms));
}

CurveOptions options_from_json(const Json& j, bool require_complete) {
  CurveOptions opts;
  opts.resolve_offsets = j.value("resolve_offsets", false);
  opts.declared_c1 = j.value("c1", false);
  opts.require_complete = require_complete;
  return opts;
}

Json condition_json(const ConditionResult& c) {
  return Json{{"pass", c.pass}, {"detail", c.detail}};
}

Json cycle_json(const LimitCycle& c) {
  return Json{{"index", c.index},
              {"y0", c.y0},
              {"alpha_cross", c.alpha_cross},
              {"amplitude", c.amplitude},
              {"stability", to_string(c.stability)},
              {"residual", c.residual},
              {"p_prime", c.p_prime}};
}

Json alpha_json(const AmplitudeBound& ab) {
  return Json{{"interval_index", ab.interval_index},
              {"value", ab.value},
              {"residual", ab.residual}};
}

}  // namespace

Json segment_to_json(const Segment& seg) {
  if (const auto* arc = std::get_if<ArcSegment>(&seg))
    return Json{{"kind", "arc"},   {"x_lo", arc->x_lo}, {"x_hi", arc->x_hi},
                {"x0", arc->x0},   {"c", arc->c},       {"r", arc->r},
                {"b", arc->b}};
  const auto& lin = std::get<LinearSegment>(seg);
  Json j{{"kind", "linear"},
         {"x_lo", lin.x_lo},
         {"x_hi", nullptr},
         {"slope", lin.slope},
         {"anchor_x", lin.anchor_x},
         {"anchor_y", lin.anchor_y}};
  if (std::isfinite(lin.x_hi))
    j["x_hi"] = lin.x_hi;
  else
    j["x_hi"] = "inf";
  return j;
}

Segment segment_from_json(const Json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "arc") {
    ArcSegment arc;
    arc.x_lo = require_num(j, "x_lo");
    arc.x_hi = num_or_inf(j, "x_hi");
    arc.x0 = require_num(j, "x0");
    arc.c = require_num(j, "c");
    arc.r = require_num(j, "r");
    arc.b = require_num(j, "b");
    return arc;
  }
  if (kind == "linear") {
    LinearSegment lin;
    lin.x_lo = require_num(j, "x_lo");
    lin.x_hi = num_or_inf(j, "x_hi");
    lin.slope = require_num(j, "slope");
    lin.anchor_x = require_num(j, "anchor_x");
    lin.anchor_y = require_num(j, "anchor_y");
    return lin;
  }
  raise("ParseError", "segment kind must be \"arc\" or \"linear\"");
}

LienardSystem system_from_json(const Json& j) {
  if (!j.contains("segments")) raise("ParseError", "missing \"segments\"");
  if (!j.contains("g")) raise("ParseError", "missing \"g\"");
  return LienardSystem{
      OddPiecewiseCurve(segments_from_json(j.at("segments")),
                        options_from_json(j, /*require_complete=*/true)),
      g_from_json(j.at("g"))};
}

Json system_to_json(const LienardSystem& system) {
  Json segs = Json::array();
  for (const auto& s : system.F.segments()) segs.push_back(segment_to_json(s));
  Json coeffs = Json::array();
  for (const auto& [e, c] : system.g.terms())
    coeffs.push_back(Json::array({e, c}));
  // Offsets are written as evaluated, so the document round-trips bitwise.
  return Json{{"segments", segs},
              {"g", Json{{"coeffs", coeffs}}},
              {"c1", system.F.validation().max_slope_residual < 1e-6},
              {"resolve_offsets", false}};
}

ExtensionPlan plan_from_json(const Json& j) {
  if (!j.contains("f1")) raise("ParseError", "missing \"f1\"");
  const Json& f1 = j.at("f1");
  if (!f1.contains("segments") || !f1.contains("g"))
    raise("ParseError", "\"f1\" must contain \"segments\" and \"g\"");

  ExtensionPlan plan{
      OddPiecewiseCurve(segments_from_json(f1.at("segments")),
                        options_from_json(f1, /*require_complete=*/false)),
      g_from_json(f1.at("g")),
      {},
      std::nullopt};

  const auto parse_phi = [](const Json& p) -> std::optional<PhiMap> {
    if (p.is_string()) {
      if (p.get<std::string>() == "auto") return std::nullopt;
      raise("ParseError", "phi must be \"auto\" or {\"A\", \"B\"}");
    }
    PhiMap phi;
    phi.A = require_num(p, "A");
    phi.B = require_num(p, "B");
    return phi;
  };
  const auto parse_targets = [](const Json& t) {
    std::vector<Segment> segs;
    if (t.is_array())
      for (const auto& s : t) segs.push_back(segment_from_json(s));
    else
      segs.push_back(segment_from_json(t));
    return segs;
  };

  for (const auto& s : j.value("steps", Json::array())) {
    StepSpec spec;
    spec.a_next = require_num(s, "a_next");
    spec.L_next = require_num(s, "L_next");
    spec.phi_L = s.contains("phi_L") ? parse_phi(s.at("phi_L")) : std::nullopt;
    spec.phi_R = s.contains("phi_R") ? parse_phi(s.at("phi_R")) : std::nullopt;
    if (!s.contains("target_left") || !s.contains("target_right"))
      raise("ParseError", "step needs target_left and target_right");
    spec.target_left = parse_targets(s.at("target_left"));
    spec.target_right = parse_targets(s.at("target_right"));
    plan.steps.push_back(std::move(spec));
  }

  if (j.contains("tail_slope")) {
    const auto& t = j.at("tail_slope");
    if (t.is_string()) {
      if (t.get<std::string>() != "auto")
        raise("ParseError", "tail_slope must be a number or \"auto\"");
    } else {
      plan.tail_slope = t.get<double>();
    }
  }
  return plan;
}

Json cycles_report_json(const CycleScan& scan,
                        const std::vector<double>& zeros,
                        const std::vector<Extremum>& extrema,
                        const std::vector<AmplitudeBound>& alpha_bars) {
  Json cycles = Json::array();
  for (const auto& c : scan.cycles) cycles.push_back(cycle_json(c));
  Json exts = Json::array();
  for (const auto& e : extrema)
    exts.push_back(Json{{"x", e.x}, {"value", e.value}});
  Json alphas = Json::array();
  for (const auto& ab : alpha_bars) alphas.push_back(alpha_json(ab));
  return Json{{"y_max", scan.y_max}, {"zeros", zeros},
              {"extrema", exts},     {"cycles", cycles},
              {"alpha_bars", alphas}, {"notes", scan.notes}};
}

Json theorem_report_json(const TheoremReport& rep) {
  Json cycles = Json::array();
  for (const auto& c : rep.scan.cycles) cycles.push_back(cycle_json(c));
  Json exts = Json::array();
  for (const auto& e : rep.extrema)
    exts.push_back(Json{{"x", e.x}, {"value", e.value}});
  Json alphas = Json::array();
  for (const auto& ab : rep.alpha_bars) alphas.push_back(alpha_json(ab));
  return Json{{"zeros", rep.zeros},
              {"extrema", exts},
              {"levels", rep.levels},
              {"alpha_bars", alphas},
              {"conditions", Json{{"i", condition_json(rep.condition_i)},
                                  {"ii", condition_json(rep.condition_ii)},
                                  {"iii", condition_json(rep.condition_iii)},
                                  {"iv", condition_json(rep.condition_iv)}}},
              {"localization", condition_json(rep.localization)},
              {"expected_cycles", rep.expected_cycles},
              {"cycles", cycles},
              {"notes", rep.scan.notes},
              {"pass", rep.pass}};
}

Json odani_report_json(const OdaniReport& rep) {
  Json phis = Json::array();
  for (const auto& pc : rep.phi_checks)
    phis.push_back(Json{{"step", pc.step},
                        {"side", std::string(1, pc.side)},
                        {"A", pc.A},
                        {"B", pc.B},
                        {"A_ge_1", pc.A_ge_1}});
  Json spans = Json::array();
  for (const auto& sp : rep.sign_pattern)
    spans.push_back(Json{{"from", sp.from},
                         {"to", sp.to},
                         {"sign", sp.sign > 0 ? ">" : "<"}});
  return Json{{"g_is_identity", rep.g_is_identity},
              {"phi_checks", phis},
              {"equality_loci", rep.equality_loci},
              {"sign_pattern", spans},
              {"equality_everywhere", rep.equality_everywhere},
              {"verdict", rep.verdict}};
}

std::string trace_to_csv(const OrbitTrace& trace) {
  std::string out = "t,x,y\n";
  char line[128];
  for (const auto& s : trace.samples) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", s.t, s.x, s.y);
    out += line;
  }
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise("IoError", "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    raise("ParseError", path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) raise("IoError", "cannot open " + path + " for writing");
  out << text;
  if (!out) raise("IoError", "failed writing " + path);
}

std::vector<AmplitudeBound> amplitude_bounds_for(
    const LienardSystem& system, const std::vector<LimitCycle>& cycles,
    const std::vector<double>& zeros) {
  std::vector<AmplitudeBound> out;
  for (size_t i = 1; i < zeros.size() && i <= cycles.size(); ++i) {
    AmplitudeBound ab = amplitude_bound(system, cycles[i - 1].y0,
                                        zeros[i - 1], zeros[i]);
    ab.interval_index = int(i);
    out.push_back(ab);
  }
  return out;
}

}  // namespace lienard
