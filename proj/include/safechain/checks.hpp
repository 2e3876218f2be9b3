#pragma once

#include <string>
#include <vector>

#include "safechain/linalg.hpp"

namespace safechain {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// Built-in acceptance checks. Each is deterministic (fixed seeds).
CheckResult check_vehicle_safety();         // 1
CheckResult check_baseline_violation();     // 2
CheckResult check_observer_convergence();   // 3
CheckResult check_transform_equivalence();  // 4
CheckResult check_envelope_bounds();        // 5
CheckResult check_qp_oracle();              // 6
CheckResult check_gain_selection();         // 7
CheckResult check_smooth_bound();           // 8

std::vector<CheckResult> run_all_checks();

// Brute-force reference for min |v - v_no|^2 s.t. a + lg.v >= 0: either the
// constraint is inactive at v_no, or the minimizer lies on the hyperplane,
// which is searched by a shrinking grid in hyperplane coordinates.
Vec brute_force_projection(const Vec& v_no, double a, const Vec& lg);

// Worst-case max |w_hat - w| for t >= 2 s on a single observer channel driven
// by a sampled chain with the given disturbance; phi_next = 0.
double observer_steady_error(double w_const, double w_amp, double dt, int substeps, double duration = 10.0);

// Max |to_transformed(x(t)) - phi(t)| over the horizon when the worked
// example is simulated in original and in chain coordinates.
double transform_discrepancy(double duration, double dt);

}  // namespace safechain
