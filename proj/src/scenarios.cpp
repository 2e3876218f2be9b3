#include "safechain/scenarios.hpp"

#include <cmath>

#include "safechain/error.hpp"

namespace safechain {

Vec VehicleState::to_vec() const
{
    Vec s(4);
    s << x, y, v, theta;
    return s;
}

VehicleState VehicleState::from_vec(const Vec& s)
{
    if (s.size() != 4)
        throw Error(ErrorKind::Domain, "vehicle state has 4 entries");
    return {s(0), s(1), s(2), s(3)};
}

Vec ObstacleState::to_vec() const
{
    Vec s(3);
    s << x_d, y_d, theta_d;
    return s;
}

ObstacleState ObstacleState::from_vec(const Vec& s)
{
    if (s.size() != 3)
        throw Error(ErrorKind::Domain, "obstacle state has 3 entries");
    return {s(0), s(1), s(2)};
}

double obstacle_speed(double) { return 1.0; }

double obstacle_turn_rate(double t) { return 2.0 * std::cos(2.0 * t); }

Vec vehicle_rhs(const VehicleState& s, const Vec& u)
{
    Vec d(4);
    d << s.v * std::cos(s.theta), s.v * std::sin(s.theta), u(0), u(1);
    return d;
}

Vec obstacle_rhs(const ObstacleState& s, double t)
{
    const double vd = obstacle_speed(t);
    Vec d(3);
    d << vd * std::cos(s.theta_d), vd * std::sin(s.theta_d), obstacle_turn_rate(t);
    return d;
}

Vec vehicle_nominal(const VehicleState& s)
{
    Vec u(2);
    u << -(s.v - 1.0), -s.theta;
    return u;
}

SimConfig build_vehicle_scenario(VehicleMode mode, const VehicleParams& params)
{
    SimConfig cfg;
    cfg.scenario = mode == VehicleMode::DORCBF ? "vehicle_dorcbf" : "vehicle_bcbf";
    cfg.dt = params.dt;
    cfg.duration = params.duration;
    cfg.filter_enabled = params.filter_enabled;
    cfg.sampled_decay = params.sampled_decay;
    cfg.observer_substeps = params.observer_substeps;
    cfg.auto_rho = params.auto_rho;
    cfg.rho_margin = params.rho_margin;

    auto& p = cfg.problem;
    p.model = vehicle_chain_model();
    p.x0 = params.x0.to_vec();
    p.exo0 = params.obstacle0.to_vec();
    p.plant_rhs = [](double, const Vec& s, const Vec& u) { return vehicle_rhs(VehicleState::from_vec(s), u); };
    const bool frozen = params.static_obstacle;
    p.exo_rhs = [frozen](double t, const Vec& e) {
        return frozen ? Vec::Zero(3).eval() : obstacle_rhs(ObstacleState::from_vec(e), t);
    };
    // chain: Delta = p - p_d, then the planar velocity
    p.chain_state = [](const Vec& s, const Vec& e) {
        Vec c(4);
        c << s(0) - e(0), s(1) - e(1), s(2) * std::cos(s(3)), s(2) * std::sin(s(3));
        return c;
    };
    p.true_residual = [frozen](double t, const Vec&, const Vec& e) {
        Vec w = Vec::Zero(4);
        if (!frozen) {
            const Vec d = obstacle_rhs(ObstacleState::from_vec(e), t);
            w(0) = -d(0);
            w(1) = -d(1);
        }
        return w;
    };
    p.nominal_input = [](double, const Vec& s) { return vehicle_nominal(VehicleState::from_vec(s)); };
    const double r2 = params.radius * params.radius;
    p.h1 = [r2](std::span<const Taylor> phi) { return phi[0] * phi[0] + phi[1] * phi[1] - r2; };
    p.observed = {true, false};
    p.safety_radius = params.radius;
    p.distance = [](const Vec& s, const Vec& e) { return std::hypot(s(0) - e(0), s(1) - e(1)); };

    auto& b = cfg.barrier;
    b.n = 2;
    b.m = 2;
    b.h1 = p.h1;
    b.rho = params.rho;
    b.theta = params.theta;
    b.mu = params.mu;
    b.gain = params.gain;
    b.mode = mode == VehicleMode::DORCBF ? BarrierMode::Observer : BarrierMode::Nominal;

    cfg.observer_gains = {params.observer, params.observer};
    cfg.varsigma_bar = {params.varsigma_bar, 0.0};
    finalize_config(cfg);
    return cfg;
}

std::vector<Vec> worked_example_disturbance(const WorkedExampleParams& params, double t)
{
    return {Vec::Constant(1, params.d1_amp * std::sin(t)), Vec::Constant(1, params.d2_amp * std::cos(t)),
            Vec::Constant(1, params.d3)};
}

double worked_example_virtual_law(const WorkedExampleParams& params, const Vec& phi)
{
    return -(6.0 * (phi(0) - params.target) + 11.0 * phi(1) + 6.0 * phi(2));
}

SimConfig build_worked_example_scenario(const WorkedExampleParams& params)
{
    SimConfig cfg;
    cfg.scenario = "worked_example_n3";
    cfg.dt = params.dt;
    cfg.duration = params.duration;
    cfg.filter_enabled = params.filter_enabled;
    cfg.sampled_decay = params.sampled_decay;
    cfg.observer_substeps = params.observer_substeps;
    cfg.auto_rho = params.auto_rho;
    cfg.rho_margin = params.rho_margin;

    if (params.x0.size() != 3)
        throw Error(ErrorKind::Config, "worked example x0 has 3 entries");

    auto& p = cfg.problem;
    p.model = worked_example_model();
    p.x0 = params.x0;
    p.exo0 = Vec();
    const auto model = p.model;
    p.plant_rhs = [model, params](double t, const Vec& x, const Vec& u) {
        return original_rhs(model, x, u, worked_example_disturbance(params, t), t);
    };
    p.chain_state = [model](const Vec& x, const Vec&) { return to_transformed(model, x); };
    p.true_residual = [model, params](double t, const Vec& x, const Vec&) {
        const auto w = residual_disturbance(model, x, worked_example_disturbance(params, t));
        Vec out(3);
        out << w[0](0), w[1](0), w[2](0);
        return out;
    };
    p.nominal_input = [model, params](double, const Vec& x) {
        const Vec v = Vec::Constant(1, worked_example_virtual_law(params, to_transformed(model, x)));
        return input_from_virtual(model, x, v);
    };
    const double c = params.center;
    const double r2 = params.radius * params.radius;
    p.h1 = [c, r2](std::span<const Taylor> phi) {
        const Taylor e = phi[0] - c;
        return e * e - r2;
    };
    p.observed = {true, true, true};
    p.safety_radius = params.radius;
    p.distance = [c](const Vec& x, const Vec&) { return std::abs(x(0) - c); };

    auto& b = cfg.barrier;
    b.n = 3;
    b.m = 1;
    b.h1 = p.h1;
    b.rho = params.rho;
    b.theta = params.theta;
    b.mu = params.mu;
    b.gain = params.gain;
    b.mode = params.mode;
    b.disturbance_bound = std::hypot(params.d1_amp, params.d2_amp, params.d3);

    cfg.observer_gains.assign(3, params.observer);
    cfg.varsigma_bar.assign(3, params.varsigma_bar);
    finalize_config(cfg);
    return cfg;
}

std::vector<std::string> scenario_keys() { return {"vehicle_dorcbf", "vehicle_bcbf", "worked_example_n3"}; }

SimConfig make_scenario(const std::string& key)
{
    if (key == "vehicle_dorcbf")
        return build_vehicle_scenario(VehicleMode::DORCBF);
    if (key == "vehicle_bcbf")
        return build_vehicle_scenario(VehicleMode::BCBF);
    if (key == "worked_example_n3")
        return build_worked_example_scenario();
    throw Error(ErrorKind::Config, "unknown scenario '" + key + "'");
}

}  // namespace safechain
