#pragma once

#include "safechain/sim.hpp"

// Full-length vehicle runs, simulated once per test binary.
const safechain::SimulationTrace& dorcbf_trace();
const safechain::SimulationTrace& bcbf_trace();
