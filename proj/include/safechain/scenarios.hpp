#pragma once

#include <string>
#include <vector>

#include "safechain/sim.hpp"

namespace safechain {

struct VehicleState {
    double x = 0.0;
    double y = 0.0;
    double v = 0.0;
    double theta = 0.0;

    Vec to_vec() const;
    static VehicleState from_vec(const Vec& s);
};

// Obstacle modeled as a second vehicle with prescribed speed and turn rate.
struct ObstacleState {
    double x_d = 3.0;
    double y_d = -3.0;
    double theta_d = 1.5707963267948966;

    Vec to_vec() const;
    static ObstacleState from_vec(const Vec& s);
};

double obstacle_speed(double t);      // v_d(t) = 1
double obstacle_turn_rate(double t);  // u_d(t) = 2 cos(2t)

Vec vehicle_rhs(const VehicleState& s, const Vec& u);
Vec obstacle_rhs(const ObstacleState& s, double t);
Vec vehicle_nominal(const VehicleState& s);

enum class VehicleMode { DORCBF, BCBF };

struct VehicleParams {
    VehicleState x0{};
    ObstacleState obstacle0{};
    double radius = 1.0;
    std::vector<double> rho{5.0, 0.5};
    double theta = 3.0;
    std::vector<double> mu{0.2, 100.0};
    GainFunction gain = GainFunction::linear();
    ObserverGains observer{};
    double varsigma_bar = 2.5;
    double dt = 1e-3;
    double duration = 10.0;
    bool filter_enabled = true;
    bool sampled_decay = true;
    int observer_substeps = 1;
    bool auto_rho = false;
    double rho_margin = 0.1;
    // Freeze the obstacle at its initial position (disturbance-free runs).
    bool static_obstacle = false;
};

SimConfig build_vehicle_scenario(VehicleMode mode, const VehicleParams& params = {});

struct WorkedExampleParams {
    Vec x0 = Vec::Zero(3);
    // d_1 = a1 sin t, d_2 = a2 cos t, d_3 = a3
    double d1_amp = 0.3;
    double d2_amp = 0.2;
    double d3 = 0.0;
    // nominal chain law v = -(6 (phi_1 - target) + 11 phi_2 + 6 phi_3)
    double target = -1.5;
    // h_1 = (phi_1 - center)^2 - radius^2
    double center = -2.0;
    double radius = 1.0;
    BarrierMode mode = BarrierMode::Observer;
    std::vector<double> rho{1.0, 1.0, 1.0};
    double theta = 1.0;
    std::vector<double> mu{1.0, 1.0, 100.0};
    GainFunction gain = GainFunction::linear();
    ObserverGains observer{};
    double varsigma_bar = 1.0;
    double dt = 1e-3;
    double duration = 10.0;
    bool filter_enabled = true;
    bool sampled_decay = true;
    int observer_substeps = 1;
    bool auto_rho = true;
    double rho_margin = 0.1;
};

std::vector<Vec> worked_example_disturbance(const WorkedExampleParams& params, double t);
double worked_example_virtual_law(const WorkedExampleParams& params, const Vec& phi);

SimConfig build_worked_example_scenario(const WorkedExampleParams& params = {});

// "vehicle_dorcbf", "vehicle_bcbf", "worked_example_n3"
std::vector<std::string> scenario_keys();
SimConfig make_scenario(const std::string& key);

}  // namespace safechain
