#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "safechain/error.hpp"
#include "safechain/report.hpp"
#include "safechain/scenarios.hpp"
#include "safechain/sim.hpp"

using namespace safechain;

TEST_CASE("rk4 examples")
{
    const Vec one = Vec::Ones(1);
    CHECK(rk4_step([](double, const Vec& x) { return Vec::Zero(x.size()).eval(); }, one, 0.0, 0.1)(0) == 1.0);
    CHECK(rk4_step([](double, const Vec&) { return Vec::Ones(1).eval(); }, Vec::Zero(1), 0.0, 0.1)(0)
          == doctest::Approx(0.1));
    const double e = rk4_step([](double, const Vec& x) { return x; }, one, 0.0, 0.1)(0);
    CHECK(std::abs(e - 1.10517091) <= 1e-7);
    CHECK(std::abs(e - std::exp(0.1)) <= 1e-7);
    CHECK_THROWS_AS(rk4_step([](double, const Vec& x) { return x; }, one, 0.0, 0.0), Error);
    CHECK_THROWS_AS(rk4_step([](double, const Vec&) { return Vec::Constant(1, NAN).eval(); }, one, 0.0, 0.1),
                    Error);
}

TEST_CASE("step count")
{
    // steps, one fewer than records
    CHECK(step_count(10.0, 1e-3) == 10000);
    CHECK(step_count(1.0, 0.3) == 3);
    CHECK(step_count(0.1, 0.1) == 1);
}

TEST_CASE("config validation")
{
    auto cfg = make_scenario("vehicle_dorcbf");
    cfg.dt = -1.0;
    CHECK_THROWS_AS(finalize_config(cfg), Error);
    cfg = make_scenario("vehicle_dorcbf");
    cfg.duration = 1e-4;
    CHECK_THROWS_AS(finalize_config(cfg), Error);
    cfg = make_scenario("vehicle_dorcbf");
    cfg.observer_substeps = 0;
    CHECK_THROWS_AS(finalize_config(cfg), Error);
}

TEST_CASE("unsafe initial state is rejected")
{
    VehicleParams p;
    p.x0.x = 3.0;
    p.x0.y = -2.5;
    p.duration = 0.1;
    const auto cfg = build_vehicle_scenario(VehicleMode::DORCBF, p);
    try {
        run_closed_loop(cfg);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnsafeInitialState);
    }
}

TEST_CASE("identical configs give bit-identical traces")
{
    VehicleParams p;
    p.duration = 1.0;
    const auto cfg = build_vehicle_scenario(VehicleMode::DORCBF, p);
    const auto a = run_closed_loop(cfg);
    const auto b = run_closed_loop(cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        const auto& ra = a.records[k];
        const auto& rb = b.records[k];
        CHECK(ra.x == rb.x);
        CHECK(ra.v == rb.v);
        CHECK(ra.w_hat == rb.w_hat);
        CHECK(ra.h == rb.h);
    }
}

TEST_CASE("vehicle traces")
{
    const auto& d = dorcbf_trace();
    const auto& b = bcbf_trace();
    REQUIRE(d.records.size() == 10001);
    REQUIRE(b.records.size() == 10001);

    // strictly increasing time and consistent chain coordinates
    const auto chain_of = make_scenario("vehicle_dorcbf").problem.chain_state;
    for (std::size_t k = 0; k < d.records.size(); ++k) {
        const auto& r = d.records[k];
        if (k > 0)
            CHECK(r.t > d.records[k - 1].t);
        if (k % 97 == 0)
            CHECK((r.chain - chain_of(r.x, r.exo)).norm() == 0.0);
    }

    // the obstacle ignores the vehicle
    for (std::size_t k = 0; k < d.records.size(); k += 50)
        CHECK(d.records[k].exo == b.records[k].exo);

    double min_dist = 1e300;
    for (const auto& r : d.records)
        min_dist = std::min(min_dist, r.distance);
    CHECK(min_dist >= 1.0 - 1e-3);

    const auto rd = make_report(d);
    const auto rb = make_report(b);
    CHECK(rd.min_h1 >= -1e-3);
    REQUIRE(rb.first_violation_time.has_value());
    CHECK(std::abs(*rb.first_violation_time - 3.35) <= 0.5);
    CHECK(rd.encounters.size() == 2);
}

TEST_CASE("unfiltered worked example matches the chain integrated directly")
{
    WorkedExampleParams wp;
    wp.d1_amp = 0.0;
    wp.d2_amp = 0.0;
    wp.filter_enabled = false;
    wp.duration = 3.0;
    wp.x0 = Vec::Zero(3);
    wp.x0 << 0.2, -0.3, 0.1;
    const auto cfg = build_worked_example_scenario(wp);
    const auto trace = run_closed_loop(cfg);
    const auto& model = cfg.problem.model;

    // phi' = (phi_2, phi_3, G u - beta_3) with the logged input held over each step
    Vec phi = trace.records.front().phi;
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
        const Vec u = trace.records[k].u;
        const Rhs rhs = [&](double, const Vec& s) {
            Vec d(3);
            d << s(1), s(2), nominal_to_virtual(model, from_transformed(model, s), u)(0);
            return d;
        };
        phi = rk4_step(rhs, phi, trace.records[k].t, cfg.dt);
        worst = std::max(worst, (phi - trace.records[k + 1].phi).norm());
    }
    CHECK(worst <= 1e-6);
}
