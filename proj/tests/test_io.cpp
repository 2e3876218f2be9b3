#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "fixtures.hpp"
#include "safechain/error.hpp"
#include "safechain/plot.hpp"
#include "safechain/report.hpp"
#include "safechain/scenarios.hpp"
#include "safechain/trace_io.hpp"

using namespace safechain;

namespace {

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');)
        out.push_back(f);
    return out;
}

std::size_t count(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("vehicle csv layout")
{
    const auto& trace = dorcbf_trace();
    const std::string text = to_csv(trace);
    CHECK(text.back() == '\n');
    const auto lines = lines_of(text);
    REQUIRE(lines.size() == 10002);
    CHECK(lines[0]
          == "t,x,y,v,theta,xd,yd,dist,h1,h2,zeta,filter_active,v1,v2,u1,u2,what1x,what1y,w1x,w1y");
    const auto row0 = split(lines[1]);
    REQUIRE(row0.size() == 20);
    CHECK(std::stod(row0[7]) == doctest::Approx(std::sqrt(18.0)).epsilon(1e-12));
    CHECK(std::stod(row0[8]) == doctest::Approx(17.0));
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto f = split(lines[k])[11];
        if (f != "0" && f != "1") {
            FAIL("filter_active is " << f << " in row " << k);
            break;
        }
    }
}

TEST_CASE("csv round trip keeps the trace")
{
    const auto& trace = dorcbf_trace();
    const auto meta = trace_meta(trace);
    CHECK(uses_vehicle_layout(meta));
    const auto back = from_csv(to_csv(trace), meta);
    REQUIRE(back.records.size() == trace.records.size());
    for (std::size_t k = 0; k < trace.records.size(); k += 7) {
        const auto& a = trace.records[k];
        const auto& b = back.records[k];
        CHECK(a.t == b.t);
        CHECK(a.x == b.x);
        CHECK(a.h == b.h);
        CHECK(a.v == b.v);
        CHECK(a.u == b.u);
        CHECK(a.zeta == b.zeta);
        CHECK(a.filter_active == b.filter_active);
        CHECK(a.distance == b.distance);
        CHECK(a.w_hat.head(2) == b.w_hat.head(2));
    }
    // reports depend on the trace only
    CHECK(report_json(make_report(trace)) == report_json(make_report(back)));
}

TEST_CASE("generic csv round trip")
{
    WorkedExampleParams wp;
    wp.duration = 0.5;
    const auto trace = run_closed_loop(build_worked_example_scenario(wp));
    const auto meta = trace_meta(trace);
    CHECK_FALSE(uses_vehicle_layout(meta));
    const std::string path = "safechain_test_trace.csv";
    write_csv(trace, path);
    const auto back = read_csv(path, meta);
    std::remove(path.c_str());
    REQUIRE(back.records.size() == trace.records.size());
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
        const auto& a = trace.records[k];
        const auto& b = back.records[k];
        CHECK(a.x == b.x);
        CHECK(a.phi == b.phi);
        CHECK(a.chain == b.chain);
        CHECK(a.w_hat == b.w_hat);
        CHECK(a.w_true == b.w_true);
        CHECK(a.sigma1 == b.sigma1);
        CHECK(a.correction_norm == b.correction_norm);
    }
    CHECK(report_json(make_report(trace)) == report_json(make_report(back)));
}

TEST_CASE("malformed csv")
{
    const auto meta = trace_meta(dorcbf_trace());
    CHECK_THROWS_AS(from_csv("a,b\n1,2\n", meta), Error);
    const std::string header = lines_of(to_csv(dorcbf_trace()))[0];
    CHECK_THROWS_AS(from_csv(header + "\n1,2,3\n", meta), Error);
    CHECK_THROWS_AS(read_csv("/nonexistent/trace.csv", meta), Error);
}

TEST_CASE("run reports")
{
    const auto d = make_report(dorcbf_trace(), 0.25);
    const auto b = make_report(bcbf_trace());
    CHECK(d.records == 10001);
    CHECK(d.runtime_s == 0.25);
    CHECK_FALSE(d.first_violation_time.has_value());
    CHECK(d.min_h1 >= -1e-3);
    REQUIRE(d.observer_max_steady_error.has_value());
    // the obstacle speed is 1; the estimate tracks it to a fraction of that
    CHECK(*d.observer_max_steady_error < 0.25);
    for (const auto& e : d.encounters)
        CHECK(e.distance < 1.5);
    CHECK(b.min_h1 < 0.0);
    CHECK(b.first_violation_time.has_value());
    CHECK_FALSE(b.observer_max_steady_error.has_value());

    const auto c = make_compare(d, b);
    CHECK(c.dorcbf_safe);
    CHECK(c.bcbf_violates);
    const auto j = compare_json(c);
    CHECK(j["bcbf"]["first_violation_time"].get<double>() == *b.first_violation_time);
    CHECK(report_text(d).find("vehicle_dorcbf") != std::string::npos);
}

TEST_CASE("svg output")
{
    const auto& d = dorcbf_trace();
    const auto traj = svg_document(d, PlotKind::Trajectory);
    CHECK(traj.find("<svg") != std::string::npos);
    CHECK(traj.find("</svg>") != std::string::npos);
    CHECK(count(traj, "<circle") >= make_report(d).encounters.size());
    CHECK(svg_document(d, PlotKind::Barrier).find("<polyline") != std::string::npos);
    CHECK(svg_document(d, PlotKind::States).find("<polyline") != std::string::npos);

    CHECK(parse_plot_kind("barrier") == PlotKind::Barrier);
    CHECK_THROWS_AS(parse_plot_kind("pie"), Error);

    SimulationTrace empty;
    CHECK_THROWS_AS(svg_document(empty, PlotKind::Trajectory), Error);
}

TEST_CASE("short runs have no steady observer error")
{
    VehicleParams p;
    p.duration = 1.0;
    const auto rep = make_report(run_closed_loop(build_vehicle_scenario(VehicleMode::DORCBF, p)));
    CHECK_FALSE(rep.observer_max_steady_error.has_value());
    CHECK(rep.encounters.empty());
}
