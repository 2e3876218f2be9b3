#include "fixtures.hpp"

#include "safechain/scenarios.hpp"

using namespace safechain;

const SimulationTrace& dorcbf_trace()
{
    static const SimulationTrace trace = run_closed_loop(make_scenario("vehicle_dorcbf"));
    return trace;
}

const SimulationTrace& bcbf_trace()
{
    static const SimulationTrace trace = run_closed_loop(make_scenario("vehicle_bcbf"));
    return trace;
}
