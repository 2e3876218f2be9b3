#pragma once

#include <functional>
#include <string>
#include <vector>

#include "safechain/linalg.hpp"

namespace safechain {

// Perturbed strict-feedback system
//   dx_i/dt = x_{i+1} + phi_i(xbar_i) + d_i(t),   i < n
//   dx_n/dt = G(x) u + phi_n(x) + d_n(t)
// with blocks x_i in R^m, stacked as [x_1; ...; x_n].
//
// The plant may carry its own raw state (e.g. speed and heading) from which the
// stacked state is read through `chart`; G is evaluated on the raw state since
// it may not be recoverable from the stacked one. Without a chart the raw state
// is the stacked state.
//
// beta_i and its block Jacobians are supplied in closed form; they must satisfy
//   beta_0 = 0,
//   beta_i = -phi_i + sum_{k<i} (d beta_{i-1} / d x_k)(x_{k+1} + phi_k),
// which beta_consistency_check() verifies numerically.
struct StrictFeedbackModel {
    using BlockFn = std::function<Vec(int i, const Vec& x)>;
    using JacobianFn = std::function<Mat(int i, int k, const Vec& x)>;

    std::string name;
    int n = 1;
    int m = 1;
    int raw_dim = 1;
    std::function<Vec(const Vec& raw)> chart;
    BlockFn phi;            // i = 1..n
    BlockFn beta;           // i = 1..n, beta_0 is implicit
    JacobianFn beta_jac;    // d beta_i / d x_k for 1 <= k <= i <= n-1
    std::function<Mat(const Vec& raw)> input_matrix;
    double g_regularization = 1e-3;
};

void validate(const StrictFeedbackModel& model);

Vec stacked_state(const StrictFeedbackModel& model, const Vec& raw);

// beta_i evaluated on the stacked state; beta_0 is zero.
Vec beta_value(const StrictFeedbackModel& model, int i, const Vec& x);

// phi_i = x_i - beta_{i-1}(xbar_{i-1}).
Vec to_transformed(const StrictFeedbackModel& model, const Vec& raw);

// Inverse of to_transformed on the stacked state (the map is triangular).
Vec from_transformed(const StrictFeedbackModel& model, const Vec& transformed);

// G with pivots of magnitude below g_regularization clamped, keeping sign.
// The QR factor is normalized so Q is a proper rotation and only the last
// pivot carries the sign of det(G).
Mat regularized_input_matrix(const StrictFeedbackModel& model, const Vec& raw);

// u = G^{-1} (v + beta_n)
Vec input_from_virtual(const StrictFeedbackModel& model, const Vec& raw, const Vec& v);

// v_no = G u_no - beta_n
Vec nominal_to_virtual(const StrictFeedbackModel& model, const Vec& raw, const Vec& u_no);

// w_i = d_i - sum_{k<i} (d beta_{i-1} / d x_k) d_k
std::vector<Vec> residual_disturbance(const StrictFeedbackModel& model, const Vec& raw,
                                      const std::vector<Vec>& d_values);

// Max over levels of the recursion residual, with central differences standing
// in for the beta Jacobians.
double beta_consistency_check(const StrictFeedbackModel& model, const Vec& raw, double fd_step);

// Stacked dx/dt of the strict-feedback form.
Vec original_rhs(const StrictFeedbackModel& model, const Vec& raw, const Vec& u,
                 const std::vector<Vec>& d_values, double t);

// Built-in models: "worked_example_n3", "vehicle_chain_n2".
StrictFeedbackModel make_model(const std::string& key);
StrictFeedbackModel worked_example_model();
StrictFeedbackModel vehicle_chain_model();

}  // namespace safechain
