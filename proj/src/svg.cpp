#include "lienard/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace lienard {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 560;
constexpr int kMargin = 48;

const char* kCycleColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                              "#9467bd", "#ff7f0e", "#8c564b"};

struct Mapper {
  double x_min, x_max, y_min, y_max;
  double px(double x) const {
    return kMargin + (x - x_min) / (x_max - x_min) * (kWidth - 2 * kMargin);
  }
  double py(double y) const {
    return kHeight - kMargin -
           (y - y_min) / (y_max - y_min) * (kHeight - 2 * kMargin);
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string polyline(const std::vector<std::pair<double, double>>& pts,
                     const Mapper& m, const std::string& color,
                     const std::string& cls, bool close) {
  std::ostringstream os;
  os << "<path class=\"" << cls << "\" fill=\"none\" stroke=\"" << color
     << "\" stroke-width=\"1.4\" d=\"";
  char buf[64];
  for (size_t i = 0; i < pts.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%c%.2f %.2f", i == 0 ? 'M' : 'L',
                  m.px(pts[i].first), m.py(pts[i].second));
    os << buf;
  }
  if (close) os << "Z";
  os << "\"/>\n";
  return os.str();
}

}  // namespace

std::string render_phase_svg(const LienardSystem& system,
                             const std::vector<LimitCycle>& cycles,
                             const IntegratorConfig& config) {
  // Closed cycle polylines: right half-turn plus its reflection through the
  // origin (orbits of odd systems are symmetric).
  std::vector<std::vector<std::pair<double, double>>> loops;
  for (const auto& c : cycles) {
    HalfTurnResult ht = half_turn(system, c.y0, config, /*record=*/true);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(2 * ht.trace.samples.size());
    for (const auto& s : ht.trace.samples) pts.emplace_back(s.x, s.y);
    for (const auto& s : ht.trace.samples) pts.emplace_back(-s.x, -s.y);
    loops.push_back(std::move(pts));
  }

  double x_reach = 0.5;
  for (const auto& seg : system.F.segments()) {
    const double hi = segment_hi(seg);
    if (std::isfinite(hi)) x_reach = std::max(x_reach, hi);
    x_reach = std::max(x_reach, segment_lo(seg));
  }
  for (const auto& c : cycles) x_reach = std::max(x_reach, c.amplitude);
  x_reach *= 1.15;

  double y_reach = 0.0;
  for (const auto& c : cycles) y_reach = std::max(y_reach, c.y0);
  const int nf = 400;
  std::vector<std::pair<double, double>> fpts;
  for (int i = 0; i <= nf; ++i) {
    const double x = -x_reach + 2.0 * x_reach * i / nf;
    const double v = system.F(x);
    y_reach = std::max(y_reach, std::abs(v));
    fpts.emplace_back(x, v);
  }
  y_reach = std::max(y_reach * 1.15, 0.1);

  Mapper m{-x_reach, x_reach, -y_reach, y_reach};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
     << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes through the origin with a few labeled ticks.
  os << "<g stroke=\"#888\" stroke-width=\"1\">\n"
     << "<line x1=\"" << m.px(-x_reach) << "\" y1=\"" << m.py(0) << "\" x2=\""
     << m.px(x_reach) << "\" y2=\"" << m.py(0) << "\"/>\n"
     << "<line x1=\"" << m.px(0) << "\" y1=\"" << m.py(-y_reach) << "\" x2=\""
     << m.px(0) << "\" y2=\"" << m.py(y_reach) << "\"/>\n</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n";
  for (int k = -2; k <= 2; ++k) {
    if (k == 0) continue;
    const double xt = k * x_reach / 2.5;
    const double yt = k * y_reach / 2.5;
    os << "<line stroke=\"#888\" x1=\"" << m.px(xt) << "\" y1=\""
       << m.py(0) - 3 << "\" x2=\"" << m.px(xt) << "\" y2=\"" << m.py(0) + 3
       << "\"/>\n"
       << "<text x=\"" << m.px(xt) - 10 << "\" y=\"" << m.py(0) + 16 << "\">"
       << num(xt) << "</text>\n"
       << "<line stroke=\"#888\" x1=\"" << m.px(0) - 3 << "\" y1=\""
       << m.py(yt) << "\" x2=\"" << m.px(0) + 3 << "\" y2=\"" << m.py(yt)
       << "\"/>\n"
       << "<text x=\"" << m.px(0) + 6 << "\" y=\"" << m.py(yt) + 4 << "\">"
       << num(yt) << "</text>\n";
  }
  os << "<text x=\"" << kWidth - kMargin + 6 << "\" y=\"" << m.py(0) + 4
     << "\">x</text>\n"
     << "<text x=\"" << m.px(0) - 14 << "\" y=\"" << kMargin - 8
     << "\">y</text>\n</g>\n";

  os << polyline(fpts, m, "#555555", "fcurve", false);
  for (size_t i = 0; i < loops.size(); ++i)
    os << polyline(loops[i], m,
                   kCycleColors[i % (sizeof(kCycleColors) /
                                     sizeof(kCycleColors[0]))],
                   "cycle", true);

  // Legend.
  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  double ly = kMargin;
  os << "<line x1=\"" << kWidth - 190 << "\" y1=\"" << ly << "\" x2=\""
     << kWidth - 160 << "\" y2=\"" << ly
     << "\" stroke=\"#555555\" stroke-width=\"1.4\"/>"
     << "<text x=\"" << kWidth - 152 << "\" y=\"" << ly + 4
     << "\">F(x)</text>\n";
  for (size_t i = 0; i < cycles.size(); ++i) {
    ly += 18;
    os << "<line x1=\"" << kWidth - 190 << "\" y1=\"" << ly << "\" x2=\""
       << kWidth - 160 << "\" y2=\"" << ly << "\" stroke=\""
       << kCycleColors[i % 6] << "\" stroke-width=\"1.4\"/>"
       << "<text x=\"" << kWidth - 152 << "\" y=\"" << ly + 4 << "\">cycle "
       << cycles[i].index << " (" << to_string(cycles[i].stability)
       << ")</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace lienard
