#include "safechain/barrier.hpp"

#include <cmath>
#include <limits>

#include "safechain/error.hpp"

namespace safechain {

const char* to_string(BarrierMode mode)
{
    switch (mode) {
    case BarrierMode::Nominal: return "nominal";
    case BarrierMode::WorstCase: return "worst_case";
    case BarrierMode::Observer: return "observer";
    }
    return "?";
}

void validate(const BarrierCascade& c)
{
    if (c.n < 1 || c.m < 1)
        throw Error(ErrorKind::Config, "barrier cascade needs n >= 1 and m >= 1");
    if (!c.h1)
        throw Error(ErrorKind::Config, "barrier cascade has no h1");
    if (!(c.theta >= 1.0))
        throw Error(ErrorKind::Config, "barrier theta must be >= 1");
    if (static_cast<int>(c.rho.size()) != c.n)
        throw Error(ErrorKind::Config, "barrier needs exactly n rho gains");
    for (double r : c.rho)
        if (!(r > 0.0) || !std::isfinite(r))
            throw Error(ErrorKind::Config, "barrier rho gains must be positive");
    if (c.mode == BarrierMode::Observer) {
        if (static_cast<int>(c.mu.size()) != c.n)
            throw Error(ErrorKind::Config, "observer-mode barrier needs exactly n mu weights");
        for (double mu : c.mu)
            if (!(mu > 0.0) || !std::isfinite(mu))
                throw Error(ErrorKind::Config, "barrier mu weights must be positive");
    }
    if (c.mode == BarrierMode::WorstCase && !(c.disturbance_bound >= 0.0))
        throw Error(ErrorKind::Config, "worst-case disturbance bound must be >= 0");
}

double smooth_bound(const Vec& grad_h, const Vec& w_hat, double mu)
{
    if (!(mu > 0.0))
        throw Error(ErrorKind::Domain, "smooth bound needs mu > 0");
    return grad_h.squaredNorm() / (4.0 * mu) + mu * w_hat.squaredNorm();
}

double select_initial_gain(int level, double h_prev0, double lf_h_prev0, double lambda_prev0, double upsilon_t0,
                           double theta, double margin)
{
    if (level < 2)
        throw Error(ErrorKind::Domain, "initial gains are selected for levels >= 2");
    if (!(h_prev0 > 0.0))
        throw Error(ErrorKind::UnsafeInitialState,
                    "h_" + std::to_string(level - 1) + " is not positive at the initial state");
    if (!(upsilon_t0 > 0.0) || !(margin >= 0.0))
        throw Error(ErrorKind::Domain, "initial gain selection needs Upsilon(t0) > 0 and margin >= 0");
    const double scale = std::pow(upsilon_t0, theta * (level - 1)) * h_prev0;
    const double bound = std::max(0.0, (-lf_h_prev0 + lambda_prev0) / scale);
    return std::max(kMinInitialGain, bound * (1.0 + margin));
}

namespace {

struct Layout {
    int chain;     // m n
    int time_var;  // index of t
    int w_offset;  // first w_hat variable, -1 when absent
    int num_vars;
};

Layout layout_for(const BarrierCascade& c)
{
    Layout l;
    l.chain = c.n * c.m;
    l.time_var = l.chain;
    l.w_offset = c.mode == BarrierMode::Observer ? l.chain + 1 : -1;
    l.num_vars = l.chain + 1 + (l.w_offset >= 0 ? l.chain : 0);
    return l;
}

}  // namespace

CascadeEvaluation cascade_eval(const BarrierCascade& c, const Vec& phi, double t, const Vec& w_hat,
                               const Vec& w_hat_dot)
{
    validate(c);
    const Layout lay = layout_for(c);
    const bool observer = c.mode == BarrierMode::Observer;
    if (phi.size() != lay.chain)
        throw Error(ErrorKind::Domain, "chain state has wrong dimension");
    if (observer && (w_hat.size() != lay.chain || w_hat_dot.size() != lay.chain))
        throw Error(ErrorKind::Domain, "disturbance estimate has wrong dimension");
    if (!phi.allFinite() || !std::isfinite(t))
        throw Error(ErrorKind::Numeric, "non-finite barrier input");

    const int order = c.n;
    const auto space = TaylorSpace::get(lay.num_vars, order);

    std::vector<Taylor> vars;
    vars.reserve(lay.chain);
    for (int j = 0; j < lay.chain; ++j)
        vars.push_back(Taylor::variable(space, j, phi(j)));
    const Taylor time = Taylor::variable(space, lay.time_var, t);
    std::vector<Taylor> w_vars;
    if (observer)
        for (int j = 0; j < lay.chain; ++j)
            w_vars.push_back(Taylor::variable(space, lay.w_offset + j, w_hat(j)));

    // Chain drift (phi_{i+1} for i < n, nothing on the last block) plus the estimate.
    const int last_block = lay.chain - c.m;
    auto flow = [&](int j) -> const Taylor* { return j < last_block ? &vars[j + c.m] : nullptr; };

    Taylor h = c.h1(vars);
    if (h.space() != space || h.order() < order)
        throw Error(ErrorKind::Domain, "h1 must be built from the supplied jet variables");
    {
        double grad2 = 0.0;
        for (int j = 0; j < lay.chain; ++j)
            grad2 += h.partial(j) * h.partial(j);
        if (!(grad2 > 1e-24))
            throw Error(ErrorKind::AssumptionViolation, "gradient of h1 vanishes at the evaluation point");
    }

    CascadeEvaluation out;
    for (int level = 1; level < c.n; ++level) {
        std::vector<Taylor> grad;
        grad.reserve(lay.chain);
        for (int j = 0; j < lay.chain; ++j)
            grad.push_back(h.derivative(j));

        Taylor lf = h.derivative(lay.time_var);
        for (int j = 0; j < lay.chain; ++j) {
            if (const Taylor* f = flow(j))
                lf += grad[j] * *f;
            if (observer)
                lf += grad[j] * w_vars[j];
        }

        Taylor lambda = Taylor::constant(space, 0.0).truncated(lf.order());
        if (observer) {
            const double mu = c.mu[level - 1];
            Taylor g2 = Taylor::constant(space, 0.0);
            for (const auto& g : grad)
                g2 += g * g;
            lambda = g2 * (1.0 / (4.0 * mu));
            for (int k = 0; k < c.m; ++k) {
                const Taylor& w = w_vars[(level - 1) * c.m + k];
                lambda += mu * (w * w);
            }
        } else if (c.mode == BarrierMode::WorstCase && level == 1) {
            Taylor g2 = Taylor::constant(space, 0.0);
            for (const auto& g : grad)
                g2 += g * g;
            lambda = c.disturbance_bound * sqrt(g2);
        }

        const auto series = c.gain.power_series(t, c.theta * level, order);
        const Taylor upsilon = compose(time, series);

        out.h_values.push_back(h.value());
        out.lf_values.push_back(lf.value());
        out.lambda_values.push_back(lambda.value());

        h = c.rho[level - 1] * (upsilon * h) + lf - lambda;
    }

    out.h_values.push_back(h.value());
    out.grad_hn.resize(lay.chain);
    for (int j = 0; j < lay.chain; ++j)
        out.grad_hn(j) = h.partial(j);
    out.dt_hn = h.partial(lay.time_var);
    out.grad_w_hn = Vec::Zero(lay.chain);

    double drift = out.dt_hn;
    for (int j = 0; j < lay.chain; ++j) {
        if (j < last_block)
            drift += out.grad_hn(j) * phi(j + c.m);
        if (observer) {
            out.grad_w_hn(j) = h.partial(lay.w_offset + j);
            drift += out.grad_hn(j) * w_hat(j) + out.grad_w_hn(j) * w_hat_dot(j);
        }
    }
    out.drift = drift;
    out.lg_hn = out.grad_hn.segment(last_block, c.m);

    if (observer)
        out.lambda_n = smooth_bound(out.grad_hn, w_hat.segment(last_block, c.m), c.mu[c.n - 1]);
    else if (c.mode == BarrierMode::WorstCase && c.n == 1)
        out.lambda_n = out.grad_hn.norm() * c.disturbance_bound;

    out.alpha_h = c.rho[c.n - 1] * std::pow(c.gain.eval(t), c.theta * c.n) * out.h_values.back();
    if (!std::isfinite(out.drift) || !out.grad_hn.allFinite() || !std::isfinite(out.alpha_h))
        throw Error(ErrorKind::Numeric, "barrier cascade produced non-finite values");
    return out;
}

std::vector<GainBound> initial_gain_bounds(const BarrierCascade& c, const Vec& phi, double t, const Vec& w_hat)
{
    const Vec zero = Vec::Zero(phi.size());
    const auto eval = cascade_eval(c, phi, t, w_hat.size() ? w_hat : zero, zero);
    std::vector<GainBound> out;
    for (int i = 1; i < c.n; ++i) {
        const double h = eval.h_values[i - 1];
        const double scale = std::pow(c.gain.eval(t), c.theta * i) * h;
        const double bound = h > 0.0 ? std::max(0.0, (-eval.lf_values[i - 1] + eval.lambda_values[i - 1]) / scale)
                                     : std::numeric_limits<double>::infinity();
        out.push_back({i, bound, c.rho[i - 1]});
    }
    return out;
}

BarrierCascade select_cascade_gains(BarrierCascade c, const Vec& phi, double t, const Vec& w_hat, double margin)
{
    const Vec zero = Vec::Zero(phi.size());
    const Vec& w = w_hat.size() ? w_hat : zero;
    for (int i = 1; i < c.n; ++i) {
        const auto eval = cascade_eval(c, phi, t, w, zero);
        c.rho[i - 1] = select_initial_gain(i + 1, eval.h_values[i - 1], eval.lf_values[i - 1],
                                           eval.lambda_values[i - 1], c.gain.eval(t), c.theta, margin);
    }
    return c;
}

}  // namespace safechain
