#include <doctest.h>

#include <cmath>

#include "safechain/scenarios.hpp"
#include "safechain/strict_feedback.hpp"

using namespace safechain;

namespace {

Vec v2(double a, double b)
{
    Vec x(2);
    x << a, b;
    return x;
}

Vec vec(std::initializer_list<double> xs)
{
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs)
        v(i++) = x;
    return v;
}

}  // namespace

TEST_CASE("vehicle dynamics")
{
    CHECK((vehicle_rhs({0, 0, 1, 0}, v2(0, 0)) - vec({1, 0, 0, 0})).norm() < 1e-15);
    CHECK((vehicle_rhs({0, 0, 1, M_PI / 2}, v2(0, 0)) - vec({0, 1, 0, 0})).norm() < 1e-15);
    CHECK((vehicle_rhs({0, 0, 2, M_PI / 4}, v2(1, -1)) - vec({std::sqrt(2.0), std::sqrt(2.0), 1, -1})).norm()
          < 1e-14);
}

TEST_CASE("obstacle dynamics")
{
    CHECK((obstacle_rhs({3, -3, M_PI / 2}, 0.0) - vec({0, 1, 2})).norm() < 1e-15);
    CHECK(std::abs(obstacle_turn_rate(M_PI / 4)) < 1e-15);
    CHECK(obstacle_turn_rate(M_PI / 2) == doctest::Approx(-2.0));
    CHECK(obstacle_speed(1.7) == 1.0);
}

TEST_CASE("nominal vehicle law")
{
    CHECK(vehicle_nominal({0, 0, 1, 0}).norm() == 0.0);
    CHECK(vehicle_nominal({0, 0, 0, 0}) == v2(1, 0));
    CHECK(vehicle_nominal({0, 0, 1, 0.5}) == v2(0, -0.5));
}

TEST_CASE("vehicle scenario defaults")
{
    const auto cfg = make_scenario("vehicle_dorcbf");
    const auto& p = cfg.problem;
    const Vec chain = p.chain_state(p.x0, p.exo0);
    CHECK(chain == vec({-3, 3, 0, 0}));
    const auto space = TaylorSpace::get(4, 0);
    std::vector<Taylor> phi;
    for (int i = 0; i < 4; ++i)
        phi.push_back(Taylor::variable(space, i, chain(i)));
    CHECK(p.h1(phi).value() == doctest::Approx(17.0));
    CHECK(p.distance(p.x0, p.exo0) == doctest::Approx(std::sqrt(18.0)));
    CHECK(cfg.barrier.mode == BarrierMode::Observer);
    CHECK(cfg.barrier.rho == std::vector<double>{5.0, 0.5});
    CHECK(cfg.duration == 10.0);
    CHECK(cfg.observer_gains[0].lambda0 == 20.0);
    CHECK(cfg.observer_gains[0].lambda1 == 10.0);
    REQUIRE(cfg.warnings.size() >= 1);

    const auto b = make_scenario("vehicle_bcbf");
    CHECK(b.barrier.mode == BarrierMode::Nominal);
    CHECK(b.barrier.rho == cfg.barrier.rho);
    CHECK(b.barrier.theta == cfg.barrier.theta);

    // the residual is minus the obstacle velocity on the position block only
    const Vec w = p.true_residual(0.0, p.x0, p.exo0);
    CHECK((w - vec({0, -1, 0, 0})).norm() < 1e-15);
}

TEST_CASE("gain-compliant vehicle variant")
{
    VehicleParams vp;
    vp.rho = {6.0, 0.5};
    const auto cfg = build_vehicle_scenario(VehicleMode::DORCBF, vp);
    const auto& p = cfg.problem;
    const Vec zero = Vec::Zero(4);
    const auto e = cascade_eval(cfg.barrier, p.chain_state(p.x0, p.exo0), 0.0, zero, zero);
    CHECK(e.h_values[1] == doctest::Approx(12.0));
    CHECK(cfg.warnings.empty());
}

TEST_CASE("worked example scenario")
{
    WorkedExampleParams wp;
    CHECK(worked_example_disturbance(wp, 0.0)[0](0) == 0.0);
    CHECK(worked_example_disturbance(wp, 0.0)[1](0) == doctest::Approx(0.2));
    const auto model = make_model("worked_example_n3");
    CHECK(beta_value(model, 2, vec({1, 1, 0}))(0) == doctest::Approx(-6.0));
    const auto w = residual_disturbance(model, vec({1, 0, 0}), {Vec::Constant(1, 0.5), Vec::Constant(1, 0.2),
                                                                Vec::Zero(1)});
    CHECK(w[1](0) == doctest::Approx(1.2));

    // no input, no disturbance, origin: nothing moves
    wp.d1_amp = 0.0;
    wp.d2_amp = 0.0;
    wp.target = 0.0;
    wp.filter_enabled = false;
    wp.duration = 2.0;
    const auto trace = run_closed_loop(build_worked_example_scenario(wp));
    for (const auto& r : trace.records) {
        CHECK(r.x.norm() == 0.0);
        CHECK(r.u.norm() == 0.0);
    }
}

TEST_CASE("scenario registry")
{
    const auto keys = scenario_keys();
    CHECK(keys.size() == 3);
    for (const auto& k : keys)
        CHECK(make_scenario(k).scenario == k);
    CHECK_THROWS(make_scenario("nonexistent"));
}
