#pragma once

#include "safechain/linalg.hpp"

namespace safechain {

struct FilterResult {
    Vec v;
    double zeta = 0.0;  // constraint slack at the nominal input
    bool active = false;
    double correction_norm = 0.0;
};

// Closed-form minimizer of |v - v_no|^2 subject to the single affine constraint
//   drift + lg . v - lambda_n + alpha_h >= 0.
// zeta >= 0 keeps v_no (ties included); otherwise v_no is projected onto the
// constraint boundary.
FilterResult qp_filter(const Vec& v_no, double drift, const Vec& lg, double lambda_n, double alpha_h);

// |grad h| * rho, the margin of the worst-case robust condition.
double worst_case_margin(const Vec& grad_h, double rho);

// |grad h| * |w_hat|, the nonsmooth margin of the estimate-based condition.
double dorcbf_margin(const Vec& grad_h, double w_hat_norm);

}  // namespace safechain
