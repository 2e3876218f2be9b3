#include "safechain/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "safechain/error.hpp"
#include "safechain/report.hpp"

namespace safechain {

PlotKind parse_plot_kind(const std::string& name)
{
    if (name == "trajectory")
        return PlotKind::Trajectory;
    if (name == "states")
        return PlotKind::States;
    if (name == "barrier")
        return PlotKind::Barrier;
    throw Error(ErrorKind::Config, "unknown plot kind '" + name + "' (trajectory, states, barrier)");
}

const char* to_string(PlotKind kind)
{
    switch (kind) {
    case PlotKind::Trajectory: return "trajectory";
    case PlotKind::States: return "states";
    case PlotKind::Barrier: return "barrier";
    }
    return "?";
}

namespace {

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string f(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string label(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

struct Range {
    double lo = INFINITY;
    double hi = -INFINITY;
    void add(double x)
    {
        if (std::isfinite(x)) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    void pad()
    {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        double span = hi - lo;
        if (span < 1e-12)
            span = std::max(1.0, std::abs(lo));
        lo -= 0.05 * span;
        hi += 0.05 * span;
    }
};

// Screen box with data ranges mapped onto it.
struct Frame {
    double x0, y0, w, h;
    Range xr, yr;
    double sx(double x) const { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * w; }
    double sy(double y) const { return y0 + h - (y - yr.lo) / (yr.hi - yr.lo) * h; }
};

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

std::size_t stride_for(std::size_t n)
{
    return std::max<std::size_t>(1, n / 2000);
}

void axes(std::ostringstream& os, const Frame& fr, const std::string& title, const std::string& xlabel)
{
    os << "<rect x='" << f(fr.x0) << "' y='" << f(fr.y0) << "' width='" << f(fr.w) << "' height='" << f(fr.h)
       << "' fill='none' stroke='#444'/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = fr.xr.lo + (fr.xr.hi - fr.xr.lo) * k / 4.0;
        const double yv = fr.yr.lo + (fr.yr.hi - fr.yr.lo) * k / 4.0;
        os << "<text x='" << f(fr.sx(xv)) << "' y='" << f(fr.y0 + fr.h + 14) << "' font-size='10' text-anchor='middle'>"
           << label(xv) << "</text>\n";
        os << "<text x='" << f(fr.x0 - 4) << "' y='" << f(fr.sy(yv) + 3) << "' font-size='10' text-anchor='end'>"
           << label(yv) << "</text>\n";
    }
    if (fr.yr.lo < 0.0 && fr.yr.hi > 0.0)
        os << "<line x1='" << f(fr.x0) << "' y1='" << f(fr.sy(0)) << "' x2='" << f(fr.x0 + fr.w) << "' y2='"
           << f(fr.sy(0)) << "' stroke='#999' stroke-dasharray='4,3'/>\n";
    os << "<text x='" << f(fr.x0) << "' y='" << f(fr.y0 - 6) << "' font-size='12'>" << title << "</text>\n";
    os << "<text x='" << f(fr.x0 + fr.w / 2) << "' y='" << f(fr.y0 + fr.h + 28)
       << "' font-size='10' text-anchor='middle'>" << xlabel << "</text>\n";
}

void polyline(std::ostringstream& os, const Frame& fr, const Series& s, const char* color)
{
    os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.4' points='";
    const std::size_t step = stride_for(s.x.size());
    for (std::size_t k = 0; k < s.x.size(); k += step) {
        if (std::isfinite(s.x[k]) && std::isfinite(s.y[k]))
            os << f(fr.sx(s.x[k])) << ',' << f(fr.sy(s.y[k])) << ' ';
    }
    if (!s.x.empty())
        os << f(fr.sx(s.x.back())) << ',' << f(fr.sy(s.y.back()));
    os << "'/>\n";
}

void legend(std::ostringstream& os, const Frame& fr, const std::vector<Series>& series)
{
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double y = fr.y0 + 12 + 14 * static_cast<double>(i);
        os << "<line x1='" << f(fr.x0 + fr.w - 90) << "' y1='" << f(y - 4) << "' x2='" << f(fr.x0 + fr.w - 72)
           << "' y2='" << f(y - 4) << "' stroke='" << kColors[i % 6] << "' stroke-width='2'/>\n";
        os << "<text x='" << f(fr.x0 + fr.w - 68) << "' y='" << f(y) << "' font-size='10'>" << series[i].name
           << "</text>\n";
    }
}

std::string open_svg(double w, double h)
{
    std::ostringstream os;
    os << "<?xml version='1.0' encoding='UTF-8'?>\n<svg xmlns='http://www.w3.org/2000/svg' width='" << f(w)
       << "' height='" << f(h) << "' viewBox='0 0 " << f(w) << ' ' << f(h) << "' font-family='sans-serif'>\n"
       << "<rect width='100%' height='100%' fill='white'/>\n";
    return os.str();
}

std::string trajectory(const SimulationTrace& tr)
{
    const auto& recs = tr.records;
    if (recs.front().x.size() < 2)
        throw Error(ErrorKind::Domain, "trajectory plot needs at least two plant states");
    const bool has_exo = recs.front().exo.size() >= 2;

    Series plant{"plant", {}, {}}, obstacle{"obstacle", {}, {}};
    Range xr, yr;
    for (const auto& r : recs) {
        plant.x.push_back(r.x(0));
        plant.y.push_back(r.x(1));
        xr.add(r.x(0));
        yr.add(r.x(1));
        if (has_exo) {
            obstacle.x.push_back(r.exo(0));
            obstacle.y.push_back(r.exo(1));
            xr.add(r.exo(0));
            yr.add(r.exo(1));
        }
    }
    const double radius = tr.safety_radius;
    std::vector<const TraceRecord*> marks;
    if (has_exo && std::isfinite(radius)) {
        const RunReport rep = make_report(tr);
        for (const auto& e : rep.encounters) {
            auto it = std::lower_bound(recs.begin(), recs.end(), e.t,
                                       [](const TraceRecord& r, double t) { return r.t < t; });
            if (it == recs.end())
                continue;
            marks.push_back(&*it);
            xr.add(it->exo(0) - radius);
            xr.add(it->exo(0) + radius);
            yr.add(it->exo(1) - radius);
            yr.add(it->exo(1) + radius);
        }
    }
    xr.pad();
    yr.pad();
    // equal aspect
    const double box = 560.0;
    const double span = std::max(xr.hi - xr.lo, yr.hi - yr.lo);
    const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
    Frame fr{60, 40, box, box, {cx - span / 2, cx + span / 2}, {cy - span / 2, cy + span / 2}};

    std::ostringstream os;
    os << open_svg(box + 100, box + 90);
    axes(os, fr, tr.scenario + ": trajectory", has_exo ? "x [m]" : "state 1");
    polyline(os, fr, plant, kColors[0]);
    std::vector<Series> shown{plant};
    if (has_exo) {
        polyline(os, fr, obstacle, kColors[1]);
        shown.push_back(obstacle);
        const double pr = radius / span * box;
        for (const TraceRecord* r : marks) {
            os << "<circle cx='" << f(fr.sx(r->exo(0))) << "' cy='" << f(fr.sy(r->exo(1))) << "' r='" << f(pr)
               << "' fill='none' stroke='" << kColors[1] << "' stroke-dasharray='3,2'/>\n";
            os << "<circle cx='" << f(fr.sx(r->x(0))) << "' cy='" << f(fr.sy(r->x(1))) << "' r='3' fill='"
               << kColors[0] << "'/>\n";
            os << "<text x='" << f(fr.sx(r->exo(0)) + pr + 2) << "' y='" << f(fr.sy(r->exo(1)))
               << "' font-size='10'>t=" << label(r->t) << "</text>\n";
        }
    }
    legend(os, fr, shown);
    os << "</svg>\n";
    return os.str();
}

std::string stacked(const SimulationTrace& tr, const std::vector<Series>& series, const std::string& what)
{
    const double w = 640.0, ph = 130.0, gap = 50.0;
    std::ostringstream os;
    os << open_svg(w + 100, 30 + (ph + gap) * static_cast<double>(series.size()));
    for (std::size_t i = 0; i < series.size(); ++i) {
        Range xr, yr;
        for (double x : series[i].x)
            xr.add(x);
        for (double y : series[i].y)
            yr.add(y);
        xr.hi = std::max(xr.hi, xr.lo + 1e-9);
        yr.pad();
        Frame fr{70, 30 + (ph + gap) * static_cast<double>(i), w, ph, xr, yr};
        axes(os, fr, i == 0 ? tr.scenario + ": " + what + "   [" + series[i].name + "]" : series[i].name, "t [s]");
        polyline(os, fr, series[i], kColors[i % 6]);
    }
    os << "</svg>\n";
    return os.str();
}

std::string states(const SimulationTrace& tr)
{
    static const char* vehicle_names[] = {"x [m]", "y [m]", "v [m/s]", "theta [rad]"};
    const auto dim = tr.records.front().x.size();
    const bool vehicle = tr.scenario.rfind("vehicle", 0) == 0 && dim == 4;
    std::vector<Series> series;
    for (Eigen::Index j = 0; j < dim; ++j) {
        Series s{vehicle ? vehicle_names[j] : "x" + std::to_string(j + 1), {}, {}};
        for (const auto& r : tr.records) {
            s.x.push_back(r.t);
            s.y.push_back(r.x(j));
        }
        series.push_back(std::move(s));
    }
    return stacked(tr, series, "states");
}

std::string barrier(const SimulationTrace& tr)
{
    std::vector<Series> series;
    for (int i = 0; i < tr.n; ++i) {
        Series s{"h" + std::to_string(i + 1), {}, {}};
        for (const auto& r : tr.records) {
            s.x.push_back(r.t);
            s.y.push_back(r.h.at(i));
        }
        series.push_back(std::move(s));
    }
    Series z{"zeta", {}, {}};
    for (const auto& r : tr.records) {
        z.x.push_back(r.t);
        z.y.push_back(r.zeta);
    }
    series.push_back(std::move(z));
    return stacked(tr, series, "barrier");
}

}  // namespace

std::string svg_document(const SimulationTrace& trace, PlotKind kind)
{
    if (trace.records.empty())
        throw Error(ErrorKind::Domain, "cannot plot an empty trace");
    switch (kind) {
    case PlotKind::Trajectory: return trajectory(trace);
    case PlotKind::States: return states(trace);
    case PlotKind::Barrier: return barrier(trace);
    }
    throw Error(ErrorKind::Domain, "unknown plot kind");
}

void render_svg(const SimulationTrace& trace, PlotKind kind, const std::string& path)
{
    const std::string doc = svg_document(trace, kind);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    out << doc;
    if (!out)
        throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

}  // namespace safechain
