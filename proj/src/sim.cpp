#include "safechain/sim.hpp"

#include <cmath>
#include <cstdio>

#include "safechain/error.hpp"
#include "safechain/safety_filter.hpp"

namespace safechain {

Vec rk4_step(const Rhs& rhs, const Vec& state, double t, double dt)
{
    if (!(dt > 0.0))
        throw Error(ErrorKind::Domain, "rk4 step needs dt > 0");
    auto eval = [&](double tt, const Vec& x) {
        Vec d = rhs(tt, x);
        if (!d.allFinite())
            throw Error(ErrorKind::Numeric, "non-finite state derivative");
        return d;
    };
    const Vec k1 = eval(t, state);
    const Vec k2 = eval(t + 0.5 * dt, state + 0.5 * dt * k1);
    const Vec k3 = eval(t + 0.5 * dt, state + 0.5 * dt * k2);
    const Vec k4 = eval(t + dt, state + dt * k3);
    return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::size_t step_count(double duration, double dt)
{
    return static_cast<std::size_t>(std::floor(duration / dt + 1e-9));
}

namespace {

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

}  // namespace

void finalize_config(SimConfig& cfg)
{
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
        throw Error(ErrorKind::Config, "dt must be positive");
    if (!(cfg.duration >= cfg.dt) || !std::isfinite(cfg.duration))
        throw Error(ErrorKind::Config, "duration must be at least one step");

    auto& p = cfg.problem;
    validate(p.model);
    if (!p.plant_rhs || !p.chain_state || !p.nominal_input || !p.h1)
        throw Error(ErrorKind::Config, "closed-loop problem is incomplete");
    auto& b = cfg.barrier;
    const int n = b.n;
    if (static_cast<int>(p.observed.size()) != n)
        p.observed.assign(n, false);
    if (cfg.observer_gains.size() == 1)
        cfg.observer_gains.assign(n, cfg.observer_gains.front());
    if (static_cast<int>(cfg.observer_gains.size()) != n)
        cfg.observer_gains.assign(n, ObserverGains{});
    if (cfg.varsigma_bar.size() == 1)
        cfg.varsigma_bar.assign(n, cfg.varsigma_bar.front());
    if (static_cast<int>(cfg.varsigma_bar.size()) != n)
        cfg.varsigma_bar.assign(n, 0.0);
    if (cfg.observer_substeps < 1)
        throw Error(ErrorKind::Config, "observer_substeps must be >= 1");
    if (!(cfg.rho_margin >= 0.0))
        throw Error(ErrorKind::Config, "rho_margin must be >= 0");

    const Vec phi0 = p.chain_state(p.x0, p.exo0);
    if (phi0.size() != n * b.m)
        throw Error(ErrorKind::Config, "chain state dimension does not match the barrier cascade");

    if (cfg.auto_rho)
        b = select_cascade_gains(b, phi0, 0.0, Vec::Zero(phi0.size()), cfg.rho_margin);
    validate(b);

    cfg.warnings.clear();
    for (const auto& gb : initial_gain_bounds(b, phi0, 0.0, Vec::Zero(phi0.size()))) {
        if (gb.configured <= gb.bound) {
            cfg.warnings.push_back("initial-gain bound " + fmt(gb.bound) + " exceeds rho["
                                   + std::to_string(gb.index - 1) + "]=" + fmt(gb.configured) + "; h_"
                                   + std::to_string(gb.index + 1) + " is not positive at the initial state");
        }
    }
    if (b.mode == BarrierMode::Observer) {
        for (int i = 0; i < n; ++i) {
            if (!p.observed[i])
                continue;
            const auto& g = cfg.observer_gains[i];
            (void)observer_init(g, b.m);  // rejects nonpositive gains
            if (!observer_gain_check(g.k1, g.k2, cfg.varsigma_bar[i])) {
                cfg.warnings.push_back("observer channel " + std::to_string(i + 1) + ": gains k1=" + fmt(g.k1)
                                       + ", k2=" + fmt(g.k2) + " do not satisfy k1 >= 1.5 sqrt(" + fmt(cfg.varsigma_bar[i])
                                       + ") and k2 >= 1.1 * " + fmt(cfg.varsigma_bar[i]));
            }
        }
    }
}

SimulationTrace run_closed_loop(const SimConfig& cfg)
{
    const auto& p = cfg.problem;
    const auto& b = cfg.barrier;
    const int n = b.n;
    const int m = b.m;
    const bool observer_mode = b.mode == BarrierMode::Observer;
    const double dt = cfg.dt;
    const std::size_t steps = step_count(cfg.duration, dt);

    SimulationTrace trace;
    trace.scenario = cfg.scenario;
    trace.n = n;
    trace.m = m;
    trace.dt = dt;
    trace.safety_radius = p.safety_radius;
    // channels without a running observer are reported as unobserved
    trace.observed = observer_mode ? p.observed : std::vector<bool>(n, false);
    trace.rho = b.rho;
    trace.records.reserve(steps + 1);

    Vec x = p.x0;
    Vec exo = p.exo0;

    {
        const Vec phi0 = p.chain_state(x, exo);
        const auto space = TaylorSpace::get(static_cast<int>(phi0.size()), 0);
        std::vector<Taylor> vars;
        for (Eigen::Index j = 0; j < phi0.size(); ++j)
            vars.push_back(Taylor::constant(space, phi0(j)));
        if (!(p.h1(vars).value() > 0.0))
            throw Error(ErrorKind::UnsafeInitialState, "h1 is not positive at the initial state");
    }

    std::vector<ObserverChannel> channels;
    std::vector<Vec> prev_next(n);
    Vec prev_chain;
    if (observer_mode) {
        const Vec phi0 = p.chain_state(x, exo);
        for (int i = 1; i <= n; ++i)
            channels.push_back(observer_init(cfg.observer_gains[i - 1], block(phi0, i, m)));
    }

    const Rhs exo_rhs = [&](double t, const Vec& e) { return p.exo_rhs(t, e); };

    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        try {
            const Vec chain = p.chain_state(x, exo);

            Vec w_hat = Vec::Zero(n * m);
            Vec w_hat_dot = Vec::Zero(n * m);
            Vec sigma1 = Vec::Zero(n * m);
            if (observer_mode) {
                for (int i = 1; i <= n; ++i) {
                    if (!p.observed[i - 1])
                        continue;
                    auto& ch = channels[i - 1];
                    if (k > 0) {
                        const Vec next_now = i < n ? block(chain, i + 1, m) : prev_next[i - 1];
                        ch = observer_advance(std::move(ch), block(prev_chain, i, m), block(chain, i, m),
                                              prev_next[i - 1], next_now, dt, cfg.observer_substeps);
                    }
                    set_block(w_hat, i, m, ch.w_hat);
                    set_block(w_hat_dot, i, m, ch.w_hat_dot);
                    set_block(sigma1, i, m, ch.sigma1);
                }
            }

            const Vec u_no = p.nominal_input(t, x);
            const Vec v_no = nominal_to_virtual(p.model, x, u_no);

            const CascadeEvaluation eval = cascade_eval(b, chain, t, w_hat, w_hat_dot);
            FilterResult filtered;
            double alpha_h = eval.alpha_h;
            if (cfg.sampled_decay) {
                // exact decay of the comparison system over one held step
                const double rate = b.rho[n - 1] * std::pow(b.gain.eval(t), b.theta * n);
                alpha_h = eval.h_values.back() * -std::expm1(-rate * dt) / dt;
            }
            if (cfg.filter_enabled) {
                filtered = qp_filter(v_no, eval.drift, eval.lg_hn, eval.lambda_n, alpha_h);
            } else {
                filtered.v = v_no;
                filtered.zeta = eval.drift + eval.lg_hn.dot(v_no) - eval.lambda_n + alpha_h;
            }
            const Vec u = input_from_virtual(p.model, x, filtered.v);

            TraceRecord rec;
            rec.t = t;
            rec.x = x;
            rec.phi = to_transformed(p.model, x);
            rec.chain = chain;
            rec.exo = exo;
            rec.h = eval.h_values;
            rec.zeta = filtered.zeta;
            rec.filter_active = filtered.active;
            rec.correction_norm = filtered.correction_norm;
            rec.v = filtered.v;
            rec.u = u;
            rec.w_hat = w_hat;
            rec.w_true = p.true_residual ? p.true_residual(t, x, exo) : Vec::Zero(n * m);
            rec.sigma1 = sigma1;
            if (p.distance)
                rec.distance = p.distance(x, exo);
            trace.records.push_back(std::move(rec));

            if (k == steps)
                break;

            prev_chain = chain;
            for (int i = 1; i <= n; ++i)
                prev_next[i - 1] = i < n ? block(chain, i + 1, m) : filtered.v;

            const Rhs plant = [&](double tt, const Vec& s) { return p.plant_rhs(tt, s, u); };
            x = rk4_step(plant, x, t, dt);
            if (exo.size() > 0 && p.exo_rhs)
                exo = rk4_step(exo_rhs, exo, t, dt);
        } catch (const Error& e) {
            throw e.with_context("step " + std::to_string(k) + " (t=" + fmt(t) + ")");
        }
    }
    return trace;
}

}  // namespace safechain
