#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "safechain/config.hpp"
#include "safechain/error.hpp"

using namespace safechain;

namespace {

bool any_contains(const std::vector<std::string>& xs, const std::string& needle)
{
    for (const auto& x : xs)
        if (x.find(needle) != std::string::npos)
            return true;
    return false;
}

ErrorKind kind_of(const std::string& text)
{
    try {
        parse_config_text(text);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error for " << text);
    return ErrorKind::Numeric;
}

}  // namespace

TEST_CASE("scenario key alone gives the defaults")
{
    const auto cfg = parse_config_text(R"({"scenario":"vehicle_dorcbf"})");
    CHECK(cfg.scenario == "vehicle_dorcbf");
    CHECK(cfg.dt == 1e-3);
    CHECK(cfg.duration == 10.0);
    CHECK(cfg.barrier.rho == std::vector<double>{5.0, 0.5});
    CHECK(cfg.barrier.theta == 3.0);
    CHECK(cfg.barrier.mu[0] == 0.2);
    CHECK(cfg.observer_gains[0].k1 == 10.0);
    CHECK(cfg.problem.safety_radius == 1.0);
}

TEST_CASE("initial-gain warning")
{
    const auto cfg = parse_config_text(R"({"scenario":"vehicle_dorcbf","barrier":{"rho":[5,0.5]}})");
    CHECK(any_contains(cfg.warnings, "5.294"));
    CHECK(any_contains(cfg.warnings, "rho[0]=5"));

    const auto ok = parse_config_text(R"({"scenario":"vehicle_dorcbf","barrier":{"rho":[6,0.5]}})");
    CHECK_FALSE(any_contains(ok.warnings, "rho[0]"));
}

TEST_CASE("fields are applied")
{
    const auto cfg = parse_config_text(R"({
        "scenario": "vehicle_bcbf", "dt": 0.002, "duration": 4,
        "gain_fn": {"family": "exponential", "a": 1, "alpha": 0.5},
        "observer": {"lambda0": 30},
        "vehicle": {"x0": [0, 1, 0, 0], "radius": 0.5}
    })");
    CHECK(cfg.dt == 0.002);
    CHECK(cfg.duration == 4.0);
    CHECK(cfg.barrier.gain.eval(2.0) == doctest::Approx(std::exp(1.0)));
    CHECK(cfg.observer_gains[0].lambda0 == 30.0);
    CHECK(cfg.problem.x0(1) == 1.0);
    CHECK(cfg.problem.safety_radius == 0.5);

    ConfigOverrides o;
    o.dt = 0.01;
    o.scenario = "worked_example_n3";
    const auto w = parse_config_text(R"({"scenario":"vehicle_dorcbf","dt":0.002})", o);
    CHECK(w.scenario == "worked_example_n3");
    CHECK(w.dt == 0.01);
}

TEST_CASE("bad configs are rejected")
{
    CHECK(kind_of(R"({"scenario":"vehicle_dorcbf","dt":-1})") == ErrorKind::Config);
    CHECK(kind_of(R"({"scenario":"vehicle_dorcbf","dt":0})") == ErrorKind::Config);
    CHECK(kind_of(R"({"scenario":"nonexistent"})") == ErrorKind::Config);
    CHECK(kind_of(R"({"scenario":"vehicle_dorcbf","colour":1})") == ErrorKind::Config);
    CHECK(kind_of(R"({"scenario":"vehicle_dorcbf","barrier":{"rh0":[1,1]}})") == ErrorKind::Config);
    CHECK(kind_of(R"({"scenario":"vehicle_dorcbf","gain_fn":{"family":"prescribed_time"}})") == ErrorKind::Config);
    CHECK(kind_of(R"({"scenario":"vehicle_dorcbf",)") == ErrorKind::Config);
    CHECK(kind_of(R"({"scenario":"vehicle_dorcbf","worked_example":{}})") == ErrorKind::Config);
    CHECK(kind_of(R"({"scenario":"vehicle_dorcbf","dt":"fast"})") == ErrorKind::Config);
    CHECK(kind_of(R"([1,2])") == ErrorKind::Config);

    try {
        parse_config_text(R"({"scenario":"vehicle_dorcbf","barrier":{"rh0":[1,1]}})");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("barrier.rh0") != std::string::npos);
    }
}

TEST_CASE("config files")
{
    const std::string path = "safechain_test_config.json";
    {
        std::ofstream f(path);
        f << R"({"scenario":"worked_example_n3","duration":2})";
    }
    const auto cfg = parse_config(path);
    std::remove(path.c_str());
    CHECK(cfg.scenario == "worked_example_n3");
    CHECK(cfg.barrier.n == 3);
    CHECK_THROWS_AS(parse_config("/nonexistent/dir/config.json"), Error);
}
