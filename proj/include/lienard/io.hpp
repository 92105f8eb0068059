#pragma once

#include <string>

#include <json.hpp>

#include "lienard/construction.hpp"
#include "lienard/cycles.hpp"
#include "lienard/dynamics.hpp"

namespace lienard {

using Json = nlohmann::ordered_json;

// Segment documents: {"kind": "arc", "x_lo", "x_hi", "x0", "c", "r", "b"} or
// {"kind": "linear", "x_lo", "x_hi", "slope", "anchor_x", "anchor_y"};
// "x_hi" may be the string "inf" on a final linear segment.
Json segment_to_json(const Segment& seg);
Segment segment_from_json(const Json& j);

// System documents carry "segments", "g": {"coeffs": [[exponent, coeff]...]}
// and the optional flags "c1" and "resolve_offsets".
LienardSystem system_from_json(const Json& j);
Json system_to_json(const LienardSystem& system);

// Plan documents: {"f1": system-json, "steps": [{"a_next", "L_next",
// "phi_L": "auto"|{"A","B"}, "phi_R": ..., "target_left": segment|[segments],
// "target_right": ...}], "tail_slope": number|"auto"}.
ExtensionPlan plan_from_json(const Json& j);

Json cycles_report_json(const CycleScan& scan,
                        const std::vector<double>& zeros,
                        const std::vector<Extremum>& extrema,
                        const std::vector<AmplitudeBound>& alpha_bars);
Json theorem_report_json(const TheoremReport& report);
Json odani_report_json(const OdaniReport& report);

// Header "t,x,y", one sample per row at full precision.
std::string trace_to_csv(const OrbitTrace& trace);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// alpha-bar for every interior interval (a_i, a_{i+1}) from the i-th cycle.
std::vector<AmplitudeBound> amplitude_bounds_for(
    const LienardSystem& system, const std::vector<LimitCycle>& cycles,
    const std::vector<double>& zeros);

}  // namespace lienard
