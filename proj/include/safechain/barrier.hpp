#pragma once

#include <functional>
#include <span>
#include <vector>

#include "safechain/gains.hpp"
#include "safechain/linalg.hpp"
#include "safechain/taylor.hpp"

namespace safechain {

// h_1 written in jet arithmetic over the stacked chain coordinates.
using BarrierFunction = std::function<Taylor(std::span<const Taylor> phi)>;

enum class BarrierMode {
    Nominal,    // disturbance-free cascade
    WorstCase,  // level-1 margin rho * |grad h_1| against a known disturbance bound
    Observer,   // estimate-aware cascade with smooth bounds Lambda_i
};

const char* to_string(BarrierMode mode);

// Recursive time-varying barrier cascade on the chain
//   dphi_i/dt = phi_{i+1} + w_i,  dphi_n/dt = v + w_n.
// Level i+1 is
//   h_{i+1} = rho_i Upsilon(t)^{theta i} h_i + L_f h_i - Lambda_i
// where L_f differentiates along the chain drift (plus w_hat in Observer mode)
// and includes the explicit time dependence of h_i.
struct BarrierCascade {
    int n = 1;
    int m = 1;
    BarrierFunction h1;
    std::vector<double> rho;  // rho_1..rho_n
    double theta = 1.0;
    std::vector<double> mu;   // mu_1..mu_n, Observer mode only
    GainFunction gain = GainFunction::linear();
    BarrierMode mode = BarrierMode::Nominal;
    double disturbance_bound = 0.0;  // WorstCase mode
};

void validate(const BarrierCascade& cascade);

struct CascadeEvaluation {
    std::vector<double> h_values;       // h_1..h_n
    std::vector<double> lf_values;      // L_f h_i for i = 1..n-1
    std::vector<double> lambda_values;  // Lambda_i for i = 1..n-1
    Vec grad_hn;                        // d h_n / d phi
    double dt_hn = 0.0;                 // explicit d h_n / d t
    Vec grad_w_hn;                      // d h_n / d w_hat (zero outside Observer mode)
    double drift = 0.0;                 // input-independent part of dh_n/dt
    Vec lg_hn;                          // coefficient of v in dh_n/dt
    double lambda_n = 0.0;
    double alpha_h = 0.0;               // rho_n Upsilon^{theta n} h_n
};

// |g|^2 / (4 mu) + mu |w|^2, an upper bound for |g| |w|.
double smooth_bound(const Vec& grad_h, const Vec& w_hat, double mu);

// Smallest admissible rho_{level-1} (times 1 + margin, floored at 1e-2) that
// makes h_level positive at the initial state.
double select_initial_gain(int level, double h_prev0, double lf_h_prev0, double lambda_prev0, double upsilon_t0,
                           double theta, double margin);

inline constexpr double kMinInitialGain = 1e-2;

// Largest initial-gain bound over levels 1..n-1 for the configured cascade; the
// entries are (bound, configured rho) pairs.
struct GainBound {
    int index;  // rho index, 1-based
    double bound;
    double configured;
};
std::vector<GainBound> initial_gain_bounds(const BarrierCascade& cascade, const Vec& phi, double t,
                                           const Vec& w_hat);

// Runs select_initial_gain level by level and returns the cascade with rho_1..rho_{n-1} replaced.
BarrierCascade select_cascade_gains(BarrierCascade cascade, const Vec& phi, double t, const Vec& w_hat, double margin);

// w_hat and w_hat_dot are stacked like phi; both are ignored outside Observer mode.
CascadeEvaluation cascade_eval(const BarrierCascade& cascade, const Vec& phi, double t, const Vec& w_hat,
                               const Vec& w_hat_dot);

}  // namespace safechain
