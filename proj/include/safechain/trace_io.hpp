#pragma once

#include <string>
#include <vector>

#include "safechain/sim.hpp"

namespace safechain {

// Everything about a trace that is not stored per row.
struct TraceMeta {
    std::string scenario;
    int n = 1;
    int m = 1;
    int raw_dim = 0;
    int exo_dim = 0;
    double dt = 0.0;
    double safety_radius = 0.0;
    std::vector<bool> observed;
};

TraceMeta trace_meta(const SimulationTrace& trace);

// Vehicle traces use the fixed column set
//   t, x, y, v, theta, xd, yd, dist, h1, h2, zeta, filter_active,
//   v1, v2, u1, u2, what1x, what1y, w1x, w1y
// Other traces use a generic layout covering every record field.
std::vector<std::string> csv_columns(const TraceMeta& meta);
bool uses_vehicle_layout(const TraceMeta& meta);

// Values are printed with 17 significant digits so they parse back exactly.
void write_csv(const SimulationTrace& trace, const std::string& path);
std::string to_csv(const SimulationTrace& trace);

// Fields absent from the layout (obstacle heading, sigma1, ...) come back
// zero-filled; the chain state of vehicle rows is rebuilt from the columns.
SimulationTrace read_csv(const std::string& path, const TraceMeta& meta);
SimulationTrace from_csv(const std::string& text, const TraceMeta& meta);

}  // namespace safechain
