#include "lienard/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lienard/errors.hpp"

namespace lienard {

namespace {

// Dormand-Prince 5(4) tableau (FSAL: the 7th stage is the next first stage).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                 a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// State carries a quadrature channel w accumulating the path integral of
// F dy (dw/dt = F(x) * dy/dt); w is excluded from the error norm.
struct Vec {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
};

struct Stepper {
  const LienardSystem& sys;
  const IntegratorConfig& cfg;

  Vec deriv(const Vec& v) const {
    const double fx = sys.F(v.x);
    const double gx = sys.g(v.x);
    return {v.y - fx, -gx, -fx * gx};
  }

  struct StepOut {
    Vec v;
    Vec k_end;  // derivative at the new state (FSAL)
    double err = 0.0;
  };

  StepOut step(const Vec& v, const Vec& k1, double h) const {
    const auto at = [&](double c1, double c2, double c3, double c4, double c5,
                        double c6, const Vec& k2, const Vec& k3, const Vec& k4,
                        const Vec& k5, const Vec& k6) {
      return Vec{v.x + h * (c1 * k1.x + c2 * k2.x + c3 * k3.x + c4 * k4.x +
                            c5 * k5.x + c6 * k6.x),
                 v.y + h * (c1 * k1.y + c2 * k2.y + c3 * k3.y + c4 * k4.y +
                            c5 * k5.y + c6 * k6.y),
                 v.w + h * (c1 * k1.w + c2 * k2.w + c3 * k3.w + c4 * k4.w +
                            c5 * k5.w + c6 * k6.w)};
    };
    const Vec zero{};
    const Vec k2 = deriv(at(a21, 0, 0, 0, 0, 0, zero, zero, zero, zero, zero));
    const Vec k3 = deriv(at(a31, a32, 0, 0, 0, 0, k2, zero, zero, zero, zero));
    const Vec k4 = deriv(at(a41, a42, a43, 0, 0, 0, k2, k3, zero, zero, zero));
    const Vec k5 =
        deriv(at(a51, a52, a53, a54, 0, 0, k2, k3, k4, zero, zero));
    const Vec k6 =
        deriv(at(a61, a62, a63, a64, a65, 0, k2, k3, k4, k5, zero));
    StepOut out;
    out.v = at(a71, 0.0, a73, a74, a75, a76, k2, k3, k4, k5, k6);
    out.k_end = deriv(out.v);
    const double ex =
        h * (e1 * k1.x + e3 * k3.x + e4 * k4.x + e5 * k5.x + e6 * k6.x +
             e7 * out.k_end.x);
    const double ey =
        h * (e1 * k1.y + e3 * k3.y + e4 * k4.y + e5 * k5.y + e6 * k6.y +
             e7 * out.k_end.y);
    const double scx =
        cfg.abs_tol + cfg.rel_tol * std::max(std::abs(v.x), std::abs(out.v.x));
    const double scy =
        cfg.abs_tol + cfg.rel_tol * std::max(std::abs(v.y), std::abs(out.v.y));
    out.err = std::sqrt(0.5 * ((ex / scx) * (ex / scx) +
                               (ey / scy) * (ey / scy)));
    return out;
  }
};

// Bisects on the one-step flow from (v0, k1) for a root of `phi` inside
// (0, h_hi], where phi has sign `sign_lo` at dt = 0+ and the opposite sign at
// h_hi. Returns the substep and state at the event.
template <typename Phi>
std::pair<double, Vec> refine_event(const Stepper& st, const Vec& v0,
                                    const Vec& k1, double h_hi, Phi phi,
                                    double sign_lo, double tol) {
  double lo = 0.0, hi = h_hi;
  Vec v_hi = st.step(v0, k1, h_hi).v;
  for (int it = 0; it < 120 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const Vec v_mid = st.step(v0, k1, mid).v;
    const double pm = phi(v_mid);
    if (std::abs(pm) <= tol) return {mid, v_mid};
    if ((pm > 0.0) == (sign_lo > 0.0)) {
      lo = mid;
    } else {
      hi = mid;
      v_hi = v_mid;
    }
  }
  return {hi, v_hi};
}

struct FlowOptions {
  int stop_after_crossings = 0;  // 0 = run to max_time
  bool record = false;
  bool cycle_metrics = false;  // refine y = 0 and dx/dt = 0 events
};

struct FlowOutcome {
  OrbitTrace trace;
  std::vector<AxisCrossing> crossings;
  std::vector<double> x_at_y_drop;  // x where y crosses 0 downward, x > 0
  std::vector<double> x_at_turn;    // x where dx/dt crosses 0 downward
  double f_dy = 0.0;
  double t_end = 0.0;
};

FlowOutcome integrate(const LienardSystem& sys, const IntegratorConfig& cfg,
                      double x0, double y0, const FlowOptions& opt) {
  const Stepper st{sys, cfg};
  FlowOutcome out;

  // The field is smooth except across segment joints (and their mirror
  // images). Steps are snapped to joint crossings so each step integrates a
  // smooth piece; straddling a joint would degrade the embedded pair's order
  // and the tolerance-convergence behaviour.
  std::vector<double> joints;
  for (const auto& seg : sys.F.segments()) {
    const double hi = segment_hi(seg);
    if (std::isfinite(hi)) {
      joints.push_back(hi);
      joints.push_back(-hi);
    }
  }

  Vec v{x0, y0, 0.0};
  Vec k1 = st.deriv(v);
  double t = 0.0;
  double h = std::min(cfg.max_step, 1e-3);
  bool rejected = false;
  // PI stabilization (Hairer's dopri5 controller).
  constexpr double kBeta = 0.04;
  constexpr double kExpo = 0.2 - kBeta * 0.75;
  constexpr double kSafe = 0.9;
  double err_old = 1e-4;
  int armed = 0;  // sign of x once |x| exceeded event_tol
  if (std::abs(v.x) > cfg.event_tol) armed = v.x > 0.0 ? 1 : -1;
  long steps = 0;
  constexpr long kMaxSteps = 40'000'000;

  if (opt.record) out.trace.samples.push_back({t, v.x, v.y});

  const auto finish = [&](TerminalEvent ev) {
    out.trace.terminal = ev;
    out.trace.t_end = t;
    out.trace.x_end = v.x;
    out.trace.y_end = v.y;
    out.f_dy = v.w;
    out.t_end = t;
    return out;
  };

  while (true) {
    if (t >= cfg.max_time * (1.0 - 1e-14)) return finish(TerminalEvent::MaxTime);
    if (++steps > kMaxSteps) return finish(TerminalEvent::MaxSteps);
    const double h_try = std::min(h, cfg.max_time - t);
    if (h_try < 1e-14 * std::max(1.0, t))
      raise("StepUnderflow", "step size collapsed at t = " +
                                 std::to_string(t));
    const auto trial = st.step(v, k1, h_try);

    if (trial.err > 1.0) {
      h = h_try * std::max(0.2, kSafe * std::pow(trial.err, -kExpo));
      rejected = true;
      continue;
    }

    // Accepted. Events first; axis and joint crossings truncate the step.
    double h_eff = h_try;
    Vec v_eff = trial.v;
    bool truncated = false;
    bool axis_crossing = false;

    if (armed != 0 && v_eff.x * armed < 0.0) {
      auto [dt, vev] = refine_event(
          st, v, k1, h_try, [](const Vec& s) { return s.x; },
          double(armed), cfg.event_tol);
      h_eff = dt;
      v_eff = vev;
      truncated = true;
      axis_crossing = true;
    }

    for (double xj : joints) {
      // A step that starts on a joint (just snapped there) moves off it.
      if (std::abs(v.x - xj) <= cfg.event_tol) continue;
      if (((v.x - xj) < 0.0) == ((v_eff.x - xj) < 0.0)) continue;
      auto [dt, vev] = refine_event(
          st, v, k1, h_eff, [xj](const Vec& s) { return s.x - xj; },
          v.x - xj > 0.0 ? 1.0 : -1.0, cfg.event_tol);
      if (dt < h_eff) {
        h_eff = dt;
        v_eff = vev;
        truncated = true;
        axis_crossing = false;
      }
    }

    if (opt.cycle_metrics) {
      if (v.y > 0.0 && v_eff.y <= 0.0) {
        auto [dt, vev] = refine_event(
            st, v, k1, h_eff, [](const Vec& s) { return s.y; }, 1.0,
            cfg.event_tol);
        (void)dt;
        if (vev.x > 0.0) out.x_at_y_drop.push_back(vev.x);
      }
      const double u0 = v.y - sys.F(v.x);
      const double u1 = v_eff.y - sys.F(v_eff.x);
      if (u0 > 0.0 && u1 <= 0.0) {
        auto [dt, vev] = refine_event(
            st, v, k1, h_eff,
            [&sys](const Vec& s) { return s.y - sys.F(s.x); }, 1.0,
            cfg.event_tol);
        (void)dt;
        out.x_at_turn.push_back(vev.x);
      }
    }

    t += h_eff;
    v = v_eff;
    k1 = truncated ? st.deriv(v) : trial.k_end;
    if (opt.record) out.trace.samples.push_back({t, v.x, v.y});

    if (std::abs(v.x) > cfg.escape_bound || std::abs(v.y) > cfg.escape_bound)
      return finish(TerminalEvent::Escaped);

    if (axis_crossing) {
      out.crossings.push_back({t, v.y});
      armed = 0;
      if (opt.stop_after_crossings > 0 &&
          int(out.crossings.size()) >= opt.stop_after_crossings)
        return finish(TerminalEvent::NegYAxisCrossing);
    } else if (armed == 0 && std::abs(v.x) > cfg.event_tol) {
      armed = v.x > 0.0 ? 1 : -1;
    }

    double fac;
    if (trial.err == 0.0) {
      fac = 5.0;
    } else {
      fac = kSafe * std::pow(trial.err, -kExpo) *
            std::pow(err_old, kBeta);
      fac = std::clamp(fac, 0.2, 5.0);
    }
    if (rejected) fac = std::min(fac, 1.0);
    rejected = false;
    err_old = std::max(trial.err, 1e-4);
    h = std::min(fac * h_try, cfg.max_step);
  }
}

}  // namespace

double potential_v(const LienardSystem& system, double x, double y) {
  return system.g.antiderivative(x) + 0.5 * y * y;
}

OrbitTrace flow(const LienardSystem& system, double x0, double y0,
                const IntegratorConfig& config, bool record) {
  FlowOptions opt;
  opt.record = record;
  return integrate(system, config, x0, y0, opt).trace;
}

HalfTurnResult half_turn(const LienardSystem& system, double y0,
                         const IntegratorConfig& config, bool record) {
  if (!(y0 > 0.0))
    raise("InvalidStart", "half_turn requires y0 > 0");
  FlowOptions opt;
  opt.stop_after_crossings = 1;
  opt.record = record;
  opt.cycle_metrics = true;
  FlowOutcome res = integrate(system, config, 0.0, y0, opt);
  if (res.trace.terminal == TerminalEvent::Escaped)
    raise("Escaped", "orbit from y0 = " + std::to_string(y0) +
                         " leaves |x|,|y| < " +
                         std::to_string(config.escape_bound));
  if (res.trace.terminal != TerminalEvent::NegYAxisCrossing)
    raise("NoReturn", "no y-axis crossing before max_time = " +
                          std::to_string(config.max_time));
  if (!(res.crossings.front().y < 0.0))
    raise("NoReturn", "first axis crossing has y >= 0");

  HalfTurnResult hr;
  hr.p = -res.crossings.front().y;
  hr.duration = res.t_end;
  hr.f_dy = res.f_dy;
  hr.trace = std::move(res.trace);
  hr.alpha_cross =
      res.x_at_y_drop.empty() ? 0.0 : res.x_at_y_drop.front();
  hr.amplitude = hr.alpha_cross;
  for (double xt : res.x_at_turn) hr.amplitude = std::max(hr.amplitude, xt);
  return hr;
}

double half_return(const LienardSystem& system, double y0,
                   const IntegratorConfig& config) {
  if (!(y0 > 0.0))
    raise("InvalidStart", "half_return requires y0 > 0");
  FlowOptions opt;
  opt.stop_after_crossings = 1;
  FlowOutcome res = integrate(system, config, 0.0, y0, opt);
  if (res.trace.terminal == TerminalEvent::Escaped)
    raise("Escaped", "orbit from y0 = " + std::to_string(y0) +
                         " leaves |x|,|y| < " +
                         std::to_string(config.escape_bound));
  if (res.trace.terminal != TerminalEvent::NegYAxisCrossing)
    raise("NoReturn", "no y-axis crossing before max_time = " +
                          std::to_string(config.max_time));
  if (!(res.crossings.front().y < 0.0))
    raise("NoReturn", "first axis crossing has y >= 0");
  return -res.crossings.front().y;
}

TurnsResult run_turns(const LienardSystem& system, double y0, int turns,
                      const IntegratorConfig& config, bool record) {
  if (!(y0 > 0.0)) raise("InvalidStart", "run_turns requires y0 > 0");
  if (turns < 1) raise("InvalidStart", "turns must be >= 1");
  FlowOptions opt;
  opt.stop_after_crossings = 2 * turns;
  opt.record = record;
  FlowOutcome res = integrate(system, config, 0.0, y0, opt);
  if (res.trace.terminal == TerminalEvent::Escaped)
    raise("Escaped", "orbit from y0 = " + std::to_string(y0) +
                         " escapes to infinity");
  if (res.trace.terminal != TerminalEvent::NegYAxisCrossing)
    raise("NoReturn", "orbit did not complete " + std::to_string(turns) +
                          " turns before max_time");
  TurnsResult tr;
  tr.trace = std::move(res.trace);
  tr.crossings = std::move(res.crossings);
  return tr;
}

}  // namespace lienard
