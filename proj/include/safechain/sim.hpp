#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "safechain/barrier.hpp"
#include "safechain/linalg.hpp"
#include "safechain/observer.hpp"
#include "safechain/strict_feedback.hpp"

namespace safechain {

using Rhs = std::function<Vec(double t, const Vec& state)>;

// Classical fourth-order Runge-Kutta step.
Vec rk4_step(const Rhs& rhs, const Vec& state, double t, double dt);

// Everything the loop needs to know about one plant/environment pair.
struct ClosedLoopProblem {
    StrictFeedbackModel model;
    Vec x0;    // raw plant state
    Vec exo0;  // exogenous state (moving obstacle), may be empty

    std::function<Vec(double t, const Vec& raw, const Vec& u)> plant_rhs;
    std::function<Vec(double t, const Vec& exo)> exo_rhs;

    // Chain coordinates seen by the barrier and the observers.
    std::function<Vec(const Vec& raw, const Vec& exo)> chain_state;
    // Stacked true residual disturbance of the chain; logged, never fed back.
    std::function<Vec(double t, const Vec& raw, const Vec& exo)> true_residual;
    std::function<Vec(double t, const Vec& raw)> nominal_input;

    BarrierFunction h1;
    std::vector<bool> observed;  // per chain block

    double safety_radius = std::numeric_limits<double>::quiet_NaN();
    std::function<double(const Vec& raw, const Vec& exo)> distance;
};

struct SimConfig {
    std::string scenario;
    double dt = 1e-3;
    double duration = 10.0;

    ClosedLoopProblem problem;
    BarrierCascade barrier;
    bool filter_enabled = true;
    // Replace rho_n Upsilon^{theta n} h_n in the filter by h_n (1 - exp(-rho_n Upsilon^{theta n} dt)) / dt,
    // so the held input cannot drive h_n through zero within one step when the
    // gain outgrows 1/dt. Agrees with the continuous term as dt -> 0.
    bool sampled_decay = true;

    // Euler substeps per sample for the observers; the sampled chain is
    // interpolated linearly between consecutive samples.
    int observer_substeps = 1;
    std::vector<ObserverGains> observer_gains;  // per chain block
    std::vector<double> varsigma_bar;           // per chain block

    bool auto_rho = false;
    double rho_margin = 0.1;

    std::vector<std::string> warnings;
};

// Validates the config, applies automatic gain selection and refreshes the
// gain-condition warnings. Builders and the config parser call this last.
void finalize_config(SimConfig& cfg);

struct TraceRecord {
    double t = 0.0;
    Vec x;       // raw plant state
    Vec phi;     // plant transformed coordinates
    Vec chain;   // barrier chain coordinates
    Vec exo;
    std::vector<double> h;
    double zeta = 0.0;
    bool filter_active = false;
    double correction_norm = 0.0;
    Vec v;
    Vec u;
    Vec w_hat;
    Vec w_true;
    Vec sigma1;
    double distance = std::numeric_limits<double>::quiet_NaN();
};

struct SimulationTrace {
    std::string scenario;
    int n = 1;
    int m = 1;
    double dt = 0.0;
    double safety_radius = std::numeric_limits<double>::quiet_NaN();
    std::vector<bool> observed;
    std::vector<double> rho;
    std::vector<TraceRecord> records;
};

std::size_t step_count(double duration, double dt);

// Fixed-step loop. Per step: observers, nominal input mapped to the chain,
// cascade, filter, input map, then RK4 for plant and environment with the
// input held over the step.
SimulationTrace run_closed_loop(const SimConfig& cfg);

}  // namespace safechain
