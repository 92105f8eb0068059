#pragma once

#include <string>
#include <vector>

#include "lienard/cycles.hpp"
#include "lienard/dynamics.hpp"

namespace lienard {

// Phase-plane figure: the graph of F plus every limit cycle as a closed
// curve, with axes and a legend.
std::string render_phase_svg(const LienardSystem& system,
                             const std::vector<LimitCycle>& cycles,
                             const IntegratorConfig& config);

}  // namespace lienard
