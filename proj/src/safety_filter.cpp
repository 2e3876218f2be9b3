#include "safechain/safety_filter.hpp"

#include <cmath>

#include "safechain/error.hpp"

namespace safechain {

FilterResult qp_filter(const Vec& v_no, double drift, const Vec& lg, double lambda_n, double alpha_h)
{
    if (v_no.size() != lg.size())
        throw Error(ErrorKind::Domain, "qp_filter: v_no and lg differ in size");
    if (!v_no.allFinite() || !lg.allFinite() || !std::isfinite(drift) || !std::isfinite(lambda_n)
        || !std::isfinite(alpha_h))
        throw Error(ErrorKind::Numeric, "qp_filter: non-finite input");

    FilterResult out;
    out.zeta = drift + lg.dot(v_no) - lambda_n + alpha_h;
    if (out.zeta >= 0.0) {
        out.v = v_no;
        return out;
    }
    const double lg2 = lg.squaredNorm();
    if (lg.norm() < 1e-12)
        throw Error(ErrorKind::InfeasibleConstraint, "barrier constraint violated and has no input authority");
    out.v = v_no - lg * (out.zeta / lg2);
    out.active = true;
    out.correction_norm = (out.v - v_no).norm();
    return out;
}

double worst_case_margin(const Vec& grad_h, double rho)
{
    if (!(rho >= 0.0))
        throw Error(ErrorKind::Domain, "disturbance bound must be >= 0");
    return grad_h.norm() * rho;
}

double dorcbf_margin(const Vec& grad_h, double w_hat_norm)
{
    if (!(w_hat_norm >= 0.0))
        throw Error(ErrorKind::Domain, "estimate norm must be >= 0");
    return grad_h.norm() * w_hat_norm;
}

}  // namespace safechain
