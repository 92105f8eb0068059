#include "lienard/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lienard/errors.hpp"

namespace lienard {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

double bisect_increasing(double lo, double hi, double target,
                         const RestoringFunction& g) {
  // solves 2 G(y) = target for the increasing G
  for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (2.0 * g.antiderivative(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    default: return "neutral";
  }
}

double default_y_max(const LienardSystem& system) {
  std::vector<double> zeros;
  try {
    zeros = system.F.positive_zeros();
  } catch (const Error&) {
    return 1.0;
  }
  if (zeros.empty()) return 1.0;
  const double level = 1.5 * zeros.back();
  double hi = level;
  while (2.0 * system.g.antiderivative(hi) < level * level) hi *= 2.0;
  return bisect_increasing(0.0, hi, level * level, system.g);
}

CycleScan find_cycles(const LienardSystem& system, const ScanOptions& scan,
                      const IntegratorConfig& config) {
  CycleScan out;
  out.y_max = scan.y_max > 0.0 ? scan.y_max : default_y_max(system);
  const int n = std::max(scan.grid, 8);
  const double y_lo = 1e-3;

  // Orbits beyond the outermost cycle may escape to infinity (anti-damped
  // tails steeper than 2); an escaping start point has no fixed point at or
  // above it, so it scans as delta = +inf.
  bool escape_seen = false;
  const auto delta_of = [&](double y) {
    try {
      return half_return(system, y, config) - y;
    } catch (const Error& e) {
      if (e.code() != "Escaped") throw;
      if (!escape_seen) {
        escape_seen = true;
        out.notes.push_back("escape: orbits from y0 >= " + fmt(y) +
                            " leave every bounded region");
      }
      return kInf;
    }
  };

  std::vector<double> ys(n), deltas(n);
  for (int j = 0; j < n; ++j) {
    ys[j] = y_lo + (out.y_max - y_lo) * (j + 1) / double(n);
    deltas[j] = delta_of(ys[j]);
  }

  int tiny = 0;
  for (int j = 0; j < n; ++j)
    if (std::abs(deltas[j]) < 1e-9 * std::max(1.0, ys[j])) ++tiny;
  if (tiny >= (9 * n) / 10) {
    out.notes.push_back(
        "DegenerateContinuum: half-return map is the identity to integrator "
        "accuracy; closed orbits are not isolated");
    return out;
  }

  std::vector<std::pair<double, double>> brackets;  // (lo, hi) with sign flip
  for (int j = 0; j + 1 < n; ++j)
    if ((deltas[j] < 0.0) != (deltas[j + 1] < 0.0))
      brackets.emplace_back(ys[j], ys[j + 1]);

  // Near-tangent guard: a local minimum of |delta| below 1e-3 without an
  // adjacent sign change may hide a pair of cycles inside one cell.
  for (int j = 1; j + 1 < n; ++j) {
    const double a = std::abs(deltas[j]);
    if (a >= 1e-3 || a > std::abs(deltas[j - 1]) ||
        a > std::abs(deltas[j + 1]))
      continue;
    const bool flip_left = (deltas[j - 1] < 0.0) != (deltas[j] < 0.0);
    const bool flip_right = (deltas[j] < 0.0) != (deltas[j + 1] < 0.0);
    if (flip_left || flip_right) continue;
    double lo = ys[j - 1], hi = ys[j + 1];
    double dlo = deltas[j - 1];
    for (int depth = 0; depth < 6; ++depth) {
      const int m = 8 << depth;
      for (int k = 1; k < m; ++k) {
        const double y = lo + (hi - lo) * k / double(m);
        if ((delta_of(y) < 0.0) != (dlo < 0.0))
          raise("ScanTooCoarse",
                "two cycles inside one scan cell near y0 = " + fmt(y) +
                    "; increase the grid");
      }
    }
  }

  // Post-hoc pass: a bracket cell must contain exactly one crossing.
  for (const auto& [lo, hi] : brackets) {
    int flips = 0;
    double prev = delta_of(lo);
    for (int k = 1; k <= 16; ++k) {
      const double cur = delta_of(lo + (hi - lo) * k / 16.0);
      if ((prev < 0.0) != (cur < 0.0)) ++flips;
      prev = cur;
    }
    if (flips > 1)
      raise("ScanTooCoarse", "two cycles inside the scan cell [" + fmt(lo) +
                                 ", " + fmt(hi) + "]; increase the grid");
  }

  for (const auto& [blo, bhi] : brackets) {
    double lo = blo, hi = bhi;
    double dlo = delta_of(lo);
    double best_y = lo, best_d = std::abs(dlo);
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double dm = delta_of(mid);
      if (std::abs(dm) < best_d) {
        best_d = std::abs(dm);
        best_y = mid;
      }
      if (best_d < 1e-10 || hi - lo < 8e-16 * std::max(1.0, hi)) break;
      if ((dm < 0.0) == (dlo < 0.0)) {
        lo = mid;
        dlo = dm;
      } else {
        hi = mid;
      }
    }

    if (!out.cycles.empty() &&
        best_y - out.cycles.back().y0 < 1e-7 * std::max(1.0, best_y))
      continue;  // same fixed point seen from two adjacent cells

    LimitCycle cyc;
    cyc.index = int(out.cycles.size()) + 1;
    cyc.y0 = best_y;
    cyc.residual = best_d;
    const HalfTurnResult ht = half_turn(system, cyc.y0, config);
    cyc.alpha_cross = ht.alpha_cross;
    cyc.amplitude = ht.amplitude;
    cyc.stability = classify_stability(system, cyc.y0, config, &cyc.p_prime);
    out.cycles.push_back(cyc);
  }
  return out;
}

AmplitudeBound amplitude_bound(const LienardSystem& system, double y0,
                               double a_lo, double a_hi) {
  const auto r = [&](double a) {
    const double fa = system.F(a);
    return 2.0 * system.g.antiderivative(a) + fa * fa - y0 * y0;
  };

  constexpr int kGrid = 256;
  std::vector<double> roots;
  double prev_a = a_lo, prev_r = r(a_lo);
  for (int k = 1; k <= kGrid; ++k) {
    const double a = a_lo + (a_hi - a_lo) * k / double(kGrid);
    const double ra = r(a);
    if (prev_r == 0.0) roots.push_back(prev_a);
    if ((prev_r < 0.0) != (ra < 0.0)) {
      double lo = prev_a, hi = a, rlo = prev_r;
      while (hi - lo > 1e-15 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        const double rm = r(mid);
        if (rm == 0.0) { lo = hi = mid; break; }
        if ((rm < 0.0) == (rlo < 0.0)) { lo = mid; rlo = rm; }
        else hi = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_a = a;
    prev_r = ra;
  }
  if (roots.empty())
    raise("NoRootInInterval",
          "2G + F^2 = y0^2 has no root in (" + fmt(a_lo) + ", " + fmt(a_hi) +
              ") for y0 = " + fmt(y0));

  AmplitudeBound ab;
  ab.value = *std::max_element(roots.begin(), roots.end());
  ab.residual = std::abs(r(ab.value));
  return ab;
}

Stability classify_stability(const LienardSystem& system, double y0,
                             const IntegratorConfig& config,
                             double* p_prime) {
  const double h = 1e-5 * y0;
  const double p_hi = half_return(system, y0 + h, config);
  const double p_lo = half_return(system, y0 - h, config);
  const double slope = (p_hi - p_lo) / (2.0 * h);
  if (p_prime) *p_prime = slope;
  if (slope < 1.0 - 1e-3) return Stability::Stable;
  if (slope > 1.0 + 1e-3) return Stability::Unstable;
  return Stability::Neutral;
}

TheoremReport check_theorem(const LienardSystem& system,
                            const ScanOptions& scan,
                            const IntegratorConfig& config) {
  TheoremReport rep;

  const ValidationReport& val = system.F.validation();
  {
    // (i) continuity of f and g: g is polynomial; F' continuity is gated at
    // the rounded-constants tolerance.
    std::ostringstream os;
    os << "joint value residual " << val.max_value_residual
       << ", slope residual " << val.max_slope_residual;
    rep.condition_i.pass =
        val.structurally_ok() && val.max_slope_residual < 1e-3;
    rep.condition_i.detail = os.str();
  }
  rep.condition_ii = {true,
                      "F odd by construction; g odd with g(x) > 0 for x > 0"};

  bool zeros_ok = true;
  try {
    rep.zeros = system.F.positive_zeros();
  } catch (const Error& e) {
    zeros_ok = false;
    rep.condition_iii = {false, e.what()};
  }
  const int n_zeros = int(rep.zeros.size());
  rep.expected_cycles = n_zeros;
  rep.extrema = system.F.extrema();

  if (zeros_ok && n_zeros == 0) {
    zeros_ok = false;
    rep.condition_iii = {false, "F has no positive zeros"};
  }

  // The report carries scan failures instead of raising them.
  const auto run_scan = [&]() {
    try {
      rep.scan = find_cycles(system, scan, config);
    } catch (const Error& e) {
      rep.scan.notes.push_back(std::string("scan failed: ") + e.what());
    }
  };

  if (zeros_ok) {
    // L_0 in (0, a_1), then one extremum per interior interval; the last
    // interval contributes its first extremum.
    std::ostringstream detail;
    bool iii = true;
    rep.levels.assign(n_zeros, 0.0);
    for (int i = 0; i < n_zeros && iii; ++i) {
      // levels[i] = L_i: L_0 in (0, a_1), L_i in (a_i, a_{i+1}).
      const double a = i == 0 ? 0.0 : rep.zeros[i - 1];
      const double b = rep.zeros[i];
      std::vector<double> in;
      for (const auto& ex : rep.extrema)
        if (ex.x > a && ex.x < b) in.push_back(ex.x);
      if (in.empty()) {
        iii = false;
        detail << "no extremum between " << a << " and " << b;
        break;
      }
      const bool need_unique = i > 0 && i < n_zeros - 1;
      if (need_unique && in.size() != 1) {
        iii = false;
        detail << in.size() << " extrema in [" << a << ", " << b
               << "], expected a unique one";
        break;
      }
      rep.levels[i] = in.front();
    }

    run_scan();

    if (iii) {
      for (int i = 1; i < n_zeros; ++i) {
        if (int(rep.scan.cycles.size()) < i) {
          iii = false;
          detail << "cycle " << i << " not found; cannot solve alpha-bar";
          break;
        }
        AmplitudeBound ab;
        try {
          ab = amplitude_bound(system, rep.scan.cycles[i - 1].y0,
                               rep.zeros[i - 1], rep.zeros[i]);
        } catch (const Error& e) {
          iii = false;
          detail << e.what();
          break;
        }
        ab.interval_index = i;
        rep.alpha_bars.push_back(ab);
        if (!(ab.value < rep.levels[i])) {
          iii = false;
          detail << "alpha-bar " << ab.value << " is not below L_" << i
                 << " = " << rep.levels[i];
          break;
        }
      }
    }
    if (iii) {
      detail << n_zeros << " simple zeros; alpha-bar below its level in every "
             << "interior interval";
    }
    rep.condition_iii = {iii, detail.str()};
  } else {
    run_scan();
  }

  {
    // (iv) F monotone on (a_i, alpha_bar_i] and |F| -> inf beyond a_N.
    std::ostringstream detail;
    bool iv = zeros_ok;
    for (const auto& ab : rep.alpha_bars) {
      const double a = rep.zeros[ab.interval_index - 1];
      int pos = 0, neg = 0;
      for (int k = 1; k <= 100; ++k) {
        const double x = a + (ab.value - a) * k / 100.0;
        const double d = system.F.derivative(x);
        if (d > 1e-12) ++pos;
        if (d < -1e-12) ++neg;
      }
      if ((pos > 0 && neg > 0) || pos + neg == 0) {
        iv = false;
        detail << "F is not monotone on (" << a << ", " << ab.value << "]; ";
      }
    }
    if (zeros_ok) {
      const double a_n = rep.zeros.back();
      bool tail_ok = true;
      const auto& last = system.F.segments().back();
      if (const auto* lin = std::get_if<LinearSegment>(&last))
        tail_ok = std::abs(lin->slope) > 1e-9;
      for (int k = 1; k <= 100 && tail_ok; ++k) {
        const double x = a_n + (2.0 * a_n + 1.0) * k / 100.0;
        if (system.F(x) * system.F.derivative(x) <= 0.0) tail_ok = false;
      }
      if (!tail_ok) {
        iv = false;
        detail << "|F| does not grow monotonically beyond " << a_n;
      } else {
        detail << "monotone on every (a_i, alpha-bar_i]; |F| grows beyond "
               << a_n;
      }
    } else {
      detail << "not evaluated (zeros unavailable)";
    }
    rep.condition_iv = {iv, detail.str()};
  }

  {
    std::ostringstream detail;
    bool loc = zeros_ok && !rep.levels.empty() &&
               int(rep.scan.cycles.size()) == n_zeros &&
               int(rep.alpha_bars.size()) == n_zeros - 1;
    if (loc) {
      for (int i = 1; i <= n_zeros; ++i) {
        const double cross = rep.scan.cycles[i - 1].alpha_cross;
        const double lo = i == 1 ? rep.levels[0]
                                 : rep.alpha_bars[i - 2].value;
        const double hi =
            i < n_zeros ? rep.alpha_bars[i - 1].value : kInf;
        if (!(cross > lo && cross <= hi + 1e-12)) {
          loc = false;
          detail << "cycle " << i << " crosses at " << cross
                 << ", outside (" << lo << ", " << fmt(hi) << "]";
          break;
        }
      }
      if (loc)
        detail << "every cycle crossing lies in its (alpha-bar_{i-1}, "
                  "alpha-bar_i] window";
    } else {
      detail << "cycle count " << rep.scan.cycles.size() << " vs expected "
             << n_zeros;
    }
    rep.localization = {loc, detail.str()};
  }

  rep.pass = rep.condition_i.pass && rep.condition_ii.pass &&
             rep.condition_iii.pass && rep.condition_iv.pass &&
             rep.localization.pass &&
             int(rep.scan.cycles.size()) == n_zeros;
  return rep;
}

}  // namespace lienard
