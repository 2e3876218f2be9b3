#include "safechain/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "safechain/error.hpp"

namespace safechain {

using nlohmann::json;

RunReport make_report(const SimulationTrace& trace, double runtime_s)
{
    if (trace.records.empty())
        throw Error(ErrorKind::Domain, "cannot report on an empty trace");
    const auto& recs = trace.records;

    RunReport rep;
    rep.scenario = trace.scenario;
    rep.records = recs.size();
    rep.runtime_s = runtime_s;
    rep.min_h1 = recs.front().h.at(0);
    rep.min_h1_time = recs.front().t;
    std::size_t active = 0;
    for (const auto& r : recs) {
        const double h1 = r.h.at(0);
        if (h1 < rep.min_h1) {
            rep.min_h1 = h1;
            rep.min_h1_time = r.t;
        }
        if (h1 < 0.0 && !rep.first_violation_time)
            rep.first_violation_time = r.t;
        if (std::isfinite(r.distance) && (!rep.min_distance || r.distance < *rep.min_distance))
            rep.min_distance = r.distance;
        active += r.filter_active ? 1 : 0;
    }
    rep.filter_active_fraction = static_cast<double>(active) / static_cast<double>(recs.size());

    if (std::isfinite(trace.safety_radius) && rep.min_distance) {
        const double limit = 1.5 * trace.safety_radius;
        // two-pointer window [lo, hi] around k
        std::size_t lo = 0, hi = 0;
        for (std::size_t k = 0; k < recs.size(); ++k) {
            while (recs[lo].t < recs[k].t - kEncounterWindow)
                ++lo;
            while (hi + 1 < recs.size() && recs[hi + 1].t <= recs[k].t + kEncounterWindow)
                ++hi;
            const double d = recs[k].distance;
            if (!(d < limit))
                continue;
            bool is_min = true;
            for (std::size_t j = lo; j <= hi && is_min; ++j) {
                const double dj = recs[j].distance;
                if (dj < d || (dj == d && j < k))
                    is_min = false;
            }
            if (is_min)
                rep.encounters.push_back({recs[k].t, d});
        }
    }

    bool any_observed = false;
    for (bool o : trace.observed)
        any_observed = any_observed || o;
    if (any_observed) {
        double worst = 0.0;
        bool any_steady = false;
        for (const auto& r : recs) {
            if (r.t < kSteadyFrom)
                continue;
            any_steady = true;
            for (int i = 0; i < trace.n; ++i) {
                if (!trace.observed[i])
                    continue;
                for (int j = 0; j < trace.m; ++j) {
                    const int idx = i * trace.m + j;
                    worst = std::max(worst, std::abs(r.w_hat(idx) - r.w_true(idx)));
                }
            }
        }
        if (any_steady)
            rep.observer_max_steady_error = worst;
    }
    return rep;
}

namespace {

json opt(const std::optional<double>& x)
{
    return x ? json(*x) : json(nullptr);
}

std::string num(double x, const char* f = "%.6g")
{
    char buf[48];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

}  // namespace

json report_json(const RunReport& r)
{
    json enc = json::array();
    for (const auto& e : r.encounters)
        enc.push_back({{"t", e.t}, {"distance", e.distance}});
    return {
        {"scenario", r.scenario},
        {"records", r.records},
        {"min_h1", r.min_h1},
        {"min_h1_time", r.min_h1_time},
        {"first_violation_time", opt(r.first_violation_time)},
        {"min_distance", opt(r.min_distance)},
        {"encounters", enc},
        {"observer_max_steady_error", opt(r.observer_max_steady_error)},
        {"filter_active_fraction", r.filter_active_fraction},
        {"runtime_s", r.runtime_s},
    };
}

std::string report_text(const RunReport& r)
{
    std::ostringstream os;
    os << "scenario            " << r.scenario << '\n';
    os << "records             " << r.records << '\n';
    os << "min h1              " << num(r.min_h1) << " at t=" << num(r.min_h1_time, "%.3f") << '\n';
    os << "first violation     " << (r.first_violation_time ? "t=" + num(*r.first_violation_time, "%.3f") : "none")
       << '\n';
    if (r.min_distance)
        os << "min distance        " << num(*r.min_distance) << '\n';
    os << "encounters          ";
    if (r.encounters.empty())
        os << "none";
    for (std::size_t i = 0; i < r.encounters.size(); ++i)
        os << (i ? ", " : "") << "t=" << num(r.encounters[i].t, "%.3f") << " (d=" << num(r.encounters[i].distance, "%.4f")
           << ")";
    os << '\n';
    os << "observer error t>=2 "
       << (r.observer_max_steady_error ? num(*r.observer_max_steady_error) : std::string("n/a")) << '\n';
    os << "filter active       " << num(100.0 * r.filter_active_fraction, "%.1f") << "% of steps\n";
    os << "runtime             " << num(r.runtime_s, "%.3f") << " s\n";
    return os.str();
}

CompareReport make_compare(const RunReport& dorcbf, const RunReport& bcbf, double tol)
{
    CompareReport c;
    c.dorcbf = dorcbf;
    c.bcbf = bcbf;
    c.dorcbf_safe = dorcbf.min_h1 >= -tol;
    c.bcbf_violates = bcbf.min_h1 < 0.0;
    return c;
}

json compare_json(const CompareReport& c)
{
    return {
        {"dorcbf", report_json(c.dorcbf)},
        {"bcbf", report_json(c.bcbf)},
        {"dorcbf_safe", c.dorcbf_safe},
        {"bcbf_violates", c.bcbf_violates},
    };
}

std::string compare_text(const CompareReport& c)
{
    std::ostringstream os;
    auto line = [&](const char* label, const std::string& a, const std::string& b) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-18s %-22s %-22s\n", label, a.c_str(), b.c_str());
        os << buf;
    };
    auto viol = [](const RunReport& r) {
        return r.first_violation_time ? "t=" + num(*r.first_violation_time, "%.3f") : std::string("none");
    };
    auto dist = [](const RunReport& r) { return r.min_distance ? num(*r.min_distance, "%.4f") : std::string("n/a"); };
    line("", c.dorcbf.scenario, c.bcbf.scenario);
    line("min h1", num(c.dorcbf.min_h1), num(c.bcbf.min_h1));
    line("first violation", viol(c.dorcbf), viol(c.bcbf));
    line("min distance", dist(c.dorcbf), dist(c.bcbf));
    line("encounters", std::to_string(c.dorcbf.encounters.size()), std::to_string(c.bcbf.encounters.size()));
    line("runtime [s]", num(c.dorcbf.runtime_s, "%.3f"), num(c.bcbf.runtime_s, "%.3f"));
    os << "observer run safe: " << (c.dorcbf_safe ? "yes" : "NO") << "; baseline violates: "
       << (c.bcbf_violates ? "yes" : "NO") << '\n';
    return os.str();
}

}  // namespace safechain
