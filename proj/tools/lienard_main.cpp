#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lienard/cycles.hpp"
#include "lienard/dynamics.hpp"
#include "lienard/errors.hpp"
#include "lienard/io.hpp"
#include "lienard/svg.hpp"

namespace {

using namespace lienard;

struct Overrides {
  double rtol = 0.0;
  double atol = 0.0;
  double max_time = 0.0;
};

void add_integrator_flags(CLI::App* cmd, Overrides* ov) {
  cmd->add_option("--rtol", ov->rtol, "relative tolerance (default 1e-10)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--atol", ov->atol, "absolute tolerance (default 1e-12)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-time", ov->max_time,
                  "integration time budget (default 1e3)")
      ->check(CLI::PositiveNumber);
}

IntegratorConfig make_config(const Overrides& ov) {
  IntegratorConfig cfg;
  if (const char* env = std::getenv("LIENARD_RTOL")) cfg.rel_tol = std::atof(env);
  if (ov.rtol > 0.0) cfg.rel_tol = ov.rtol;
  if (ov.atol > 0.0) cfg.abs_tol = ov.atol;
  if (ov.max_time > 0.0) cfg.max_time = ov.max_time;
  if (cfg.rel_tol <= 0.0 || cfg.abs_tol <= 0.0)
    raise("InvalidConfig", "tolerances must be positive");
  return cfg;
}

std::vector<double> safe_zeros(const LienardSystem& sys,
                               std::vector<std::string>* notes) {
  try {
    return sys.F.positive_zeros();
  } catch (const Error& e) {
    if (notes) notes->push_back(e.what());
    return {};
  }
}

int cmd_construct(const std::string& plan_path, const std::string& out_path) {
  const ExtensionPlan plan = plan_from_json(read_json_file(plan_path));
  const BuiltExtension built = build_extension(plan);
  std::cout.precision(12);
  for (size_t k = 0; k < built.steps.size(); ++k) {
    const auto& sr = built.steps[k];
    std::cout << "step " << k + 1 << ": a=" << sr.step.a_next
              << " L=" << sr.step.L_next
              << " joint_residual=" << sr.joint_residual
              << " slope_residual=" << sr.slope_residual
              << " H_left=" << (sr.induced.left.monotone_decreasing
                                    ? "monotone-decreasing"
                                    : "NOT-monotone")
              << " H_right=" << (sr.induced.right.monotone_decreasing
                                     ? "monotone-decreasing"
                                     : "NOT-monotone")
              << " sign_ok=" << (sr.induced.left.sign_ok &&
                                         sr.induced.right.sign_ok
                                     ? "yes"
                                     : "no")
              << "\n";
  }
  std::cout << "tail slope " << built.tail_slope << "\n";
  write_text_file(out_path,
                  system_to_json({built.curve, built.g}).dump(2) + "\n");
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_find_cycles(const std::string& system_path,
                    const std::string& report_path, const ScanOptions& scan,
                    const IntegratorConfig& cfg) {
  const LienardSystem sys = system_from_json(read_json_file(system_path));
  CycleScan result = find_cycles(sys, scan, cfg);
  const std::vector<double> zeros = safe_zeros(sys, &result.notes);
  std::vector<AmplitudeBound> alpha;
  try {
    alpha = amplitude_bounds_for(sys, result.cycles, zeros);
  } catch (const Error& e) {
    result.notes.push_back(e.what());
  }
  const Json rep = cycles_report_json(result, zeros, sys.F.extrema(), alpha);
  if (!report_path.empty()) write_text_file(report_path, rep.dump(2) + "\n");
  std::cout.precision(12);
  std::cout << result.cycles.size() << " cycle(s), y_max=" << result.y_max
            << "\n";
  for (const auto& c : result.cycles)
    std::cout << "cycle " << c.index << ": y0=" << c.y0
              << " alpha_cross=" << c.alpha_cross
              << " amplitude=" << c.amplitude << " "
              << to_string(c.stability) << "\n";
  for (const auto& ab : alpha)
    std::cout << "alpha_bar " << ab.interval_index << ": " << ab.value
              << "\n";
  for (const auto& n : result.notes) std::cout << "note: " << n << "\n";
  if (report_path.empty()) std::cout << rep.dump(2) << "\n";
  return 0;
}

int cmd_check(const std::string& system_path, const std::string& report_path,
              const ScanOptions& scan, const IntegratorConfig& cfg) {
  const LienardSystem sys = system_from_json(read_json_file(system_path));
  const TheoremReport rep = check_theorem(sys, scan, cfg);
  const Json j = theorem_report_json(rep);
  if (!report_path.empty()) write_text_file(report_path, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_simulate(const std::string& system_path, double y0, int turns,
                 const std::string& csv_path, const IntegratorConfig& cfg) {
  const LienardSystem sys = system_from_json(read_json_file(system_path));
  const TurnsResult res = run_turns(sys, y0, turns, cfg, /*record=*/true);
  write_text_file(csv_path, trace_to_csv(res.trace));
  std::cout.precision(12);
  std::cout << "wrote " << res.trace.samples.size() << " samples to "
            << csv_path << "\n";
  for (size_t i = 1; i < res.crossings.size(); i += 2)
    std::cout << "return " << (i + 1) / 2 << ": y=" << res.crossings[i].y
              << " at t=" << res.crossings[i].t << "\n";
  return 0;
}

int cmd_plot(const std::string& system_path, const std::string& report_path,
             const std::string& svg_path, const ScanOptions& scan,
             const IntegratorConfig& cfg) {
  const LienardSystem sys = system_from_json(read_json_file(system_path));
  std::vector<LimitCycle> cycles;
  if (!report_path.empty()) {
    const Json rep = read_json_file(report_path);
    for (const auto& c : rep.value("cycles", Json::array())) {
      LimitCycle lc;
      lc.index = c.value("index", int(cycles.size()) + 1);
      lc.y0 = c.at("y0").get<double>();
      lc.alpha_cross = c.value("alpha_cross", 0.0);
      lc.amplitude = c.value("amplitude", 0.0);
      const std::string st = c.value("stability", "neutral");
      lc.stability = st == "stable" ? Stability::Stable
                     : st == "unstable" ? Stability::Unstable
                                        : Stability::Neutral;
      cycles.push_back(lc);
    }
  } else {
    cycles = find_cycles(sys, scan, cfg).cycles;
  }
  write_text_file(svg_path, render_phase_svg(sys, cycles, cfg));
  std::cout << "wrote " << svg_path << " (" << cycles.size()
            << " cycle(s))\n";
  return 0;
}

int cmd_odani(const std::string& plan_path, const std::string& report_path) {
  const ExtensionPlan plan = plan_from_json(read_json_file(plan_path));
  const BuiltExtension built = build_extension(plan);
  const OdaniReport rep = odani_check(built);
  const Json j = odani_report_json(rep);
  if (!report_path.empty()) write_text_file(report_path, j.dump(2) + "\n");
  std::cout.precision(10);
  std::cout << "condition: " << rep.verdict
            << (rep.equality_everywhere ? " (equality everywhere)" : "")
            << "\n";
  for (double s : rep.equality_loci) std::cout << "equality at s=" << s << "\n";
  if (report_path.empty()) std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construction and verification of planar systems with a "
               "prescribed number of limit cycles"};
  app.require_subcommand(1);

  std::string plan_path, system_path, out_path, report_path, csv_path,
      svg_path;
  double y0 = 0.0;
  int turns = 1;
  Overrides ov;
  ScanOptions scan;

  auto* construct = app.add_subcommand("construct",
                                       "build a system from a plan");
  construct->add_option("--plan", plan_path, "plan JSON")->required();
  construct->add_option("--out", out_path, "output system JSON")->required();

  auto* find = app.add_subcommand("find-cycles", "locate all limit cycles");
  find->add_option("--system", system_path, "system JSON")->required();
  find->add_option("--report", report_path, "report JSON output");
  find->add_option("--ymax", scan.y_max, "scan ceiling on the y-axis");
  find->add_option("--grid", scan.grid, "scan grid size (default 200)");
  add_integrator_flags(find, &ov);

  auto* check = app.add_subcommand("check",
                                   "verify the exactly-N-cycles hypotheses");
  check->add_option("--system", system_path, "system JSON")->required();
  check->add_option("--report", report_path, "report JSON output");
  check->add_option("--ymax", scan.y_max, "scan ceiling on the y-axis");
  check->add_option("--grid", scan.grid, "scan grid size (default 200)");
  add_integrator_flags(check, &ov);

  auto* simulate = app.add_subcommand("simulate", "integrate and emit CSV");
  simulate->add_option("--system", system_path, "system JSON")->required();
  simulate->add_option("--y0", y0, "start height on the y-axis")->required();
  simulate->add_option("--turns", turns, "full returns to integrate");
  simulate->add_option("--csv", csv_path, "trace CSV output")->required();
  add_integrator_flags(simulate, &ov);

  auto* plot = app.add_subcommand("plot", "emit an SVG phase-plane figure");
  plot->add_option("--system", system_path, "system JSON")->required();
  plot->add_option("--report", report_path, "cycle report to draw from");
  plot->add_option("--svg", svg_path, "SVG output")->required();
  plot->add_option("--ymax", scan.y_max, "scan ceiling on the y-axis");
  add_integrator_flags(plot, &ov);

  auto* odani = app.add_subcommand("odani",
                                   "choice-function diagnostic for a plan");
  odani->add_option("--plan", plan_path, "plan JSON")->required();
  odani->add_option("--report", report_path, "report JSON output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (construct->parsed()) return cmd_construct(plan_path, out_path);
    const IntegratorConfig cfg = make_config(ov);
    if (find->parsed())
      return cmd_find_cycles(system_path, report_path, scan, cfg);
    if (check->parsed())
      return cmd_check(system_path, report_path, scan, cfg);
    if (simulate->parsed())
      return cmd_simulate(system_path, y0, turns, csv_path, cfg);
    if (plot->parsed())
      return cmd_plot(system_path, report_path, svg_path, scan, cfg);
    if (odani->parsed()) return cmd_odani(plan_path, report_path);
  } catch (const lienard::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
