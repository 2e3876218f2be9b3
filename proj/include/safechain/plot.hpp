#pragma once

#include <string>

#include "safechain/sim.hpp"

namespace safechain {

enum class PlotKind { Trajectory, States, Barrier };

PlotKind parse_plot_kind(const std::string& name);
const char* to_string(PlotKind kind);

// Self-contained SVG.
//   Trajectory: plant path in the plane of its first two states, the obstacle
//               path when present, and safety circles at the encounters.
//   States:     each raw state against time.
//   Barrier:    h_1..h_n and the filter slack zeta against time.
std::string svg_document(const SimulationTrace& trace, PlotKind kind);
void render_svg(const SimulationTrace& trace, PlotKind kind, const std::string& path);

}  // namespace safechain
