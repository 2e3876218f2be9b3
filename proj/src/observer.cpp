#include "safechain/observer.hpp"

#include <algorithm>
#include <cmath>

#include "safechain/error.hpp"

namespace safechain {

namespace {

double sign(double x)
{
    return static_cast<double>((x > 0.0) - (x < 0.0));
}

// |x|^{1/2} sign(x)
double signed_sqrt(double x)
{
    return std::sqrt(std::abs(x)) * sign(x);
}

}  // namespace

ObserverChannel observer_init(const ObserverGains& gains, int m)
{
    return observer_init(gains, Vec::Zero(m));
}

ObserverChannel observer_init(const ObserverGains& gains, const Vec& e0)
{
    if (!(gains.lambda0 > 0.0) || !(gains.lambda1 > 0.0) || !(gains.k1 > 0.0) || !(gains.k2 > 0.0))
        throw Error(ErrorKind::Config, "observer gains must be strictly positive");
    if (e0.size() < 1)
        throw Error(ErrorKind::Config, "observer channel width must be >= 1");
    if (!e0.allFinite())
        throw Error(ErrorKind::Numeric, "observer initial error is not finite");
    const Vec zero = Vec::Zero(e0.size());
    ObserverChannel ch;
    ch.gains = gains;
    ch.r = e0;
    ch.sigma0 = zero;
    ch.chi0 = zero;
    ch.chi1 = zero;
    ch.zeta = zero;
    ch.sigma1 = zero;
    ch.int_sign = zero;
    ch.w_hat = zero;
    ch.w_hat_dot = zero;
    return ch;
}

ObserverChannel observer_step(ObserverChannel ch, const Vec& phi_i, const Vec& phi_next, double dt)
{
    if (!(dt > 0.0))
        throw Error(ErrorKind::Domain, "observer step needs dt > 0");
    if (phi_i.size() != ch.r.size() || phi_next.size() != ch.r.size())
        throw Error(ErrorKind::Domain, "observer input width does not match the channel");
    if (!phi_i.allFinite() || !phi_next.allFinite())
        throw Error(ErrorKind::Numeric, "observer received non-finite input");

    const auto& g = ch.gains;
    ch.r += dt * (phi_next + ch.w_hat);
    ch.sigma0 = ch.r - phi_i;

    for (Eigen::Index j = 0; j < ch.r.size(); ++j) {
        const double err = ch.chi0(j) - ch.sigma0(j);
        const double zeta = -g.lambda0 * signed_sqrt(err) + ch.chi1(j);
        const double chi1_dot = -g.lambda1 * sign(ch.chi1(j) - zeta);
        ch.zeta(j) = zeta;
        ch.chi0(j) += dt * zeta;
        ch.chi1(j) += dt * chi1_dot;
    }

    ch.sigma1 = ch.sigma0 + ch.zeta;

    for (Eigen::Index j = 0; j < ch.r.size(); ++j) {
        const double s1 = ch.sigma1(j);
        ch.w_hat_dot(j) = -ch.zeta(j) - g.k1 * signed_sqrt(s1) - g.k2 * ch.int_sign(j);
        ch.w_hat(j) += dt * ch.w_hat_dot(j);
        ch.int_sign(j) += dt * sign(s1);
    }

    if (!ch.w_hat.allFinite())
        throw Error(ErrorKind::Numeric, "observer estimate diverged");
    return ch;
}

ObserverChannel observer_advance(ObserverChannel ch, const Vec& phi_from, const Vec& phi_to, const Vec& next_from,
                                 const Vec& next_to, double dt, int substeps)
{
    if (substeps < 1)
        throw Error(ErrorKind::Config, "observer substeps must be >= 1");
    if (substeps == 1)
        return observer_step(std::move(ch), phi_to, next_from, dt);
    if (phi_from.size() != phi_to.size() || next_from.size() != next_to.size())
        throw Error(ErrorKind::Domain, "observer interpolation endpoints differ in width");
    const double h = dt / substeps;
    for (int j = 1; j <= substeps; ++j) {
        const double s_end = static_cast<double>(j) / substeps;
        const double s_start = static_cast<double>(j - 1) / substeps;
        const Vec phi = phi_from + s_end * (phi_to - phi_from);
        const Vec next = next_from + s_start * (next_to - next_from);
        ch = observer_step(std::move(ch), phi, next, h);
    }
    return ch;
}

bool observer_gain_check(double k1, double k2, double varsigma_bar)
{
    if (!(varsigma_bar >= 0.0))
        throw Error(ErrorKind::Domain, "derivative bound must be nonnegative");
    // thresholds are inclusive; the slack absorbs rounding in 1.1 * bound
    const double slack = 1e-12 * std::max(1.0, varsigma_bar);
    return k1 >= 1.5 * std::sqrt(varsigma_bar) - slack && k2 >= 1.1 * varsigma_bar - slack;
}

}  // namespace safechain
