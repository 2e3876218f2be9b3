// safechain: run the built-in scenarios, compare controllers, run the checks.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include <CLI11.hpp>

#include "safechain/checks.hpp"
#include "safechain/config.hpp"
#include "safechain/error.hpp"
#include "safechain/plot.hpp"
#include "safechain/report.hpp"
#include "safechain/scenarios.hpp"
#include "safechain/trace_io.hpp"

namespace fs = std::filesystem;
using namespace safechain;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kNumeric = 3 };

struct Options {
    std::string scenario;
    std::string config;
    std::optional<double> dt;
    std::optional<double> duration;
    std::string out;
    bool svg = false;
    bool quiet = false;
};

std::string default_out()
{
    const char* env = std::getenv("SAFECHAIN_OUT_DIR");
    return env && *env ? env : "out";
}

SimConfig load(const Options& o, const std::string& fallback_scenario)
{
    ConfigOverrides ov;
    if (!o.scenario.empty())
        ov.scenario = o.scenario;
    ov.dt = o.dt;
    ov.duration = o.duration;
    if (!o.config.empty())
        return parse_config(o.config, ov);
    return scenario_config(o.scenario.empty() ? fallback_scenario : o.scenario, ov);
}

void warn(const SimConfig& cfg, const Options& o)
{
    if (o.quiet)
        return;
    for (const auto& w : cfg.warnings)
        std::cerr << "warning: " << cfg.scenario << ": " << w << '\n';
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
}

struct RunOutput {
    SimulationTrace trace;
    RunReport report;
};

RunOutput simulate(const SimConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    RunOutput r;
    r.trace = run_closed_loop(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.report = make_report(r.trace, secs);
    return r;
}

void write_outputs(const RunOutput& r, const Options& o, const fs::path& dir)
{
    const std::string stem = r.trace.scenario;
    write_csv(r.trace, (dir / (stem + ".csv")).string());
    write_text(dir / (stem + "_report.json"), report_json(r.report).dump(2) + "\n");
    if (o.svg)
        for (PlotKind k : {PlotKind::Trajectory, PlotKind::States, PlotKind::Barrier})
            render_svg(r.trace, k, (dir / (stem + "_" + to_string(k) + ".svg")).string());
}

fs::path prepare_dir(const Options& o)
{
    const fs::path dir = o.out.empty() ? default_out() : o.out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorKind::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

int cmd_run(const Options& o)
{
    const SimConfig cfg = load(o, "vehicle_dorcbf");
    warn(cfg, o);
    const fs::path dir = prepare_dir(o);
    const RunOutput r = simulate(cfg);
    write_outputs(r, o, dir);
    if (!o.quiet)
        std::cout << report_text(r.report) << "outputs in " << dir.string() << '\n';
    return kOk;
}

int cmd_compare(const Options& o)
{
    if (!o.scenario.empty())
        throw Error(ErrorKind::Config, "compare always runs vehicle_dorcbf against vehicle_bcbf");
    Options a = o, b = o;
    a.scenario = "vehicle_dorcbf";
    b.scenario = "vehicle_bcbf";
    const SimConfig ca = load(a, a.scenario);
    const SimConfig cb = load(b, b.scenario);
    warn(ca, o);
    warn(cb, o);
    const fs::path dir = prepare_dir(o);

    auto fa = std::async(std::launch::async, [&] { return simulate(ca); });
    auto fb = std::async(std::launch::async, [&] { return simulate(cb); });
    const RunOutput ra = fa.get();
    const RunOutput rb = fb.get();
    write_outputs(ra, o, dir);
    write_outputs(rb, o, dir);

    const CompareReport c = make_compare(ra.report, rb.report);
    write_text(dir / "compare_report.json", compare_json(c).dump(2) + "\n");
    if (!o.quiet)
        std::cout << compare_text(c) << "outputs in " << dir.string() << '\n';
    return c.dorcbf_safe && c.bcbf_violates ? kOk : kCheckFailed;
}

int cmd_check(const Options& o)
{
    bool all = true;
    for (const auto& r : run_all_checks()) {
        all = all && r.pass;
        if (!o.quiet || !r.pass)
            std::printf("[%s] %d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
    }
    return all ? kOk : kCheckFailed;
}

int exit_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Numeric:
    case ErrorKind::SingularInputMatrix:
    case ErrorKind::AssumptionViolation:
    case ErrorKind::InfeasibleConstraint: return kNumeric;
    default: return kUsage;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Safety-filtered simulation of perturbed strict-feedback systems"};
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub, bool with_scenario) {
        if (with_scenario) {
            sub->add_option("--scenario", o.scenario, "vehicle_dorcbf | vehicle_bcbf | worked_example_n3");
        }
        sub->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--dt", o.dt, "step size [s]");
        sub->add_option("--duration", o.duration, "horizon [s]");
        sub->add_option("--out", o.out, "output directory (default $SAFECHAIN_OUT_DIR or ./out)");
        sub->add_flag("--svg", o.svg, "also write trajectory, states and barrier SVGs");
        sub->add_flag("--quiet", o.quiet, "only print failures");
    };

    auto* run = app.add_subcommand("run", "simulate one scenario, write CSV, report and plots");
    add_common(run, true);
    auto* compare = app.add_subcommand("compare", "observer-based barrier against the baseline on the vehicle");
    add_common(compare, false);
    auto* check = app.add_subcommand("check", "run the built-in acceptance checks");
    check->add_flag("--quiet", o.quiet, "only print failures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run)
            return cmd_run(o);
        if (*compare)
            return cmd_compare(o);
        return cmd_check(o);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumeric;
    }
}
