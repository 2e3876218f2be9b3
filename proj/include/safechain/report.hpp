#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "safechain/sim.hpp"

namespace safechain {

struct Encounter {
    double t = 0.0;
    double distance = 0.0;
};

struct RunReport {
    std::string scenario;
    std::size_t records = 0;
    double min_h1 = 0.0;
    double min_h1_time = 0.0;
    std::optional<double> first_violation_time;  // set iff min_h1 < 0
    std::optional<double> min_distance;
    // Local minima of the distance below 1.5 r, each the smallest value
    // within +-encounter_window seconds.
    std::vector<Encounter> encounters;
    // max |w_hat - w| over observed channels for t >= steady_from; unset for shorter runs
    std::optional<double> observer_max_steady_error;
    double filter_active_fraction = 0.0;
    double runtime_s = 0.0;
};

inline constexpr double kEncounterWindow = 0.5;
inline constexpr double kSteadyFrom = 2.0;

// Depends on the trace only; runtime is passed through.
RunReport make_report(const SimulationTrace& trace, double runtime_s = 0.0);

nlohmann::json report_json(const RunReport& report);
std::string report_text(const RunReport& report);

// Side-by-side summary of the observer-based and baseline vehicle runs.
struct CompareReport {
    RunReport dorcbf;
    RunReport bcbf;
    bool dorcbf_safe = false;    // min h1 >= -tol
    bool bcbf_violates = false;  // min h1 < 0
};

CompareReport make_compare(const RunReport& dorcbf, const RunReport& bcbf, double tol = 1e-3);
nlohmann::json compare_json(const CompareReport& c);
std::string compare_text(const CompareReport& c);

}  // namespace safechain
