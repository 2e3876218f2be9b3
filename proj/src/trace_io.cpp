#include "safechain/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "safechain/error.hpp"

namespace safechain {

TraceMeta trace_meta(const SimulationTrace& trace)
{
    TraceMeta meta;
    meta.scenario = trace.scenario;
    meta.n = trace.n;
    meta.m = trace.m;
    meta.dt = trace.dt;
    meta.safety_radius = trace.safety_radius;
    meta.observed = trace.observed;
    if (!trace.records.empty()) {
        meta.raw_dim = static_cast<int>(trace.records.front().x.size());
        meta.exo_dim = static_cast<int>(trace.records.front().exo.size());
    }
    return meta;
}

bool uses_vehicle_layout(const TraceMeta& meta)
{
    return meta.scenario.rfind("vehicle", 0) == 0 && meta.n == 2 && meta.m == 2 && meta.raw_dim == 4
        && meta.exo_dim == 3;
}

std::vector<std::string> csv_columns(const TraceMeta& meta)
{
    if (uses_vehicle_layout(meta))
        return {"t",  "x",  "y",  "v",  "theta", "xd",     "yd",     "dist", "h1",  "h2",
                "zeta", "filter_active", "v1", "v2", "u1", "u2", "what1x", "what1y", "w1x", "w1y"};

    const int nm = meta.n * meta.m;
    std::vector<std::string> cols{"t"};
    auto series = [&](const std::string& prefix, int count) {
        for (int j = 1; j <= count; ++j)
            cols.push_back(prefix + std::to_string(j));
    };
    series("x", meta.raw_dim);
    series("phi", nm);
    series("chain", nm);
    series("exo", meta.exo_dim);
    cols.push_back("dist");
    series("h", meta.n);
    cols.push_back("zeta");
    cols.push_back("filter_active");
    cols.push_back("correction");
    series("v", meta.m);
    series("u", meta.m);
    series("what", nm);
    series("w", nm);
    series("sigma", nm);
    return cols;
}

namespace {

void put(std::string& line, double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    if (!line.empty())
        line += ',';
    line += buf;
}

void put(std::string& line, const Vec& v, Eigen::Index count)
{
    for (Eigen::Index j = 0; j < count; ++j)
        put(line, j < v.size() ? v(j) : 0.0);
}

std::string row(const TraceRecord& r, const TraceMeta& meta)
{
    std::string line;
    put(line, r.t);
    if (uses_vehicle_layout(meta)) {
        put(line, r.x, 4);
        put(line, r.exo, 2);
        put(line, r.distance);
        put(line, r.h.at(0));
        put(line, r.h.at(1));
        put(line, r.zeta);
        put(line, r.filter_active ? 1.0 : 0.0);
        put(line, r.v, 2);
        put(line, r.u, 2);
        put(line, r.w_hat, 2);
        put(line, r.w_true, 2);
        return line;
    }
    const int nm = meta.n * meta.m;
    put(line, r.x, meta.raw_dim);
    put(line, r.phi, nm);
    put(line, r.chain, nm);
    put(line, r.exo, meta.exo_dim);
    put(line, r.distance);
    for (int i = 0; i < meta.n; ++i)
        put(line, i < static_cast<int>(r.h.size()) ? r.h[i] : 0.0);
    put(line, r.zeta);
    put(line, r.filter_active ? 1.0 : 0.0);
    put(line, r.correction_norm);
    put(line, r.v, meta.m);
    put(line, r.u, meta.m);
    put(line, r.w_hat, nm);
    put(line, r.w_true, nm);
    put(line, r.sigma1, nm);
    return line;
}

std::string join(const std::vector<std::string>& cols)
{
    std::string out;
    for (const auto& c : cols) {
        if (!out.empty())
            out += ',';
        out += c;
    }
    return out;
}

std::vector<double> parse_row(const std::string& line, std::size_t expected, std::size_t line_no)
{
    std::vector<double> out;
    out.reserve(expected);
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t end = line.find(',', pos);
        if (end == std::string::npos)
            end = line.size();
        const std::string cell = line.substr(pos, end - pos);
        char* stop = nullptr;
        const double x = std::strtod(cell.c_str(), &stop);
        if (cell.empty() || stop != cell.c_str() + cell.size())
            throw Error(ErrorKind::Io, "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
        out.push_back(x);
        pos = end + 1;
    }
    if (out.size() != expected)
        throw Error(ErrorKind::Io, "line " + std::to_string(line_no) + ": expected " + std::to_string(expected)
                                       + " fields, got " + std::to_string(out.size()));
    return out;
}

Vec take(const std::vector<double>& f, std::size_t& k, int count)
{
    Vec v(count);
    for (int j = 0; j < count; ++j)
        v(j) = f[k++];
    return v;
}

TraceRecord record_from(const std::vector<double>& f, const TraceMeta& meta)
{
    TraceRecord r;
    std::size_t k = 0;
    r.t = f[k++];
    const int nm = meta.n * meta.m;
    if (uses_vehicle_layout(meta)) {
        r.x = take(f, k, 4);
        r.exo = Vec::Zero(3);
        r.exo.head(2) = take(f, k, 2);
        r.distance = f[k++];
        r.h = {f[k], f[k + 1]};
        k += 2;
        r.zeta = f[k++];
        r.filter_active = f[k++] != 0.0;
        r.v = take(f, k, 2);
        r.u = take(f, k, 2);
        r.w_hat = Vec::Zero(4);
        r.w_hat.head(2) = take(f, k, 2);
        r.w_true = Vec::Zero(4);
        r.w_true.head(2) = take(f, k, 2);
        r.phi.resize(4);
        r.phi << r.x(0), r.x(1), r.x(2) * std::cos(r.x(3)), r.x(2) * std::sin(r.x(3));
        r.chain = r.phi;
        r.chain.head(2) -= r.exo.head(2);
        r.sigma1 = Vec::Zero(4);
        return r;
    }
    r.x = take(f, k, meta.raw_dim);
    r.phi = take(f, k, nm);
    r.chain = take(f, k, nm);
    r.exo = take(f, k, meta.exo_dim);
    r.distance = f[k++];
    for (int i = 0; i < meta.n; ++i)
        r.h.push_back(f[k++]);
    r.zeta = f[k++];
    r.filter_active = f[k++] != 0.0;
    r.correction_norm = f[k++];
    r.v = take(f, k, meta.m);
    r.u = take(f, k, meta.m);
    r.w_hat = take(f, k, nm);
    r.w_true = take(f, k, nm);
    r.sigma1 = take(f, k, nm);
    return r;
}

}  // namespace

std::string to_csv(const SimulationTrace& trace)
{
    const TraceMeta meta = trace_meta(trace);
    std::string out = join(csv_columns(meta)) + '\n';
    for (const auto& r : trace.records)
        out += row(r, meta) + '\n';
    return out;
}

void write_csv(const SimulationTrace& trace, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    out << to_csv(trace);
    out.flush();
    if (!out)
        throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

SimulationTrace from_csv(const std::string& text, const TraceMeta& meta)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorKind::Io, "empty CSV");
    const auto cols = csv_columns(meta);
    if (line != join(cols))
        throw Error(ErrorKind::Io, "CSV header does not match the trace layout");

    SimulationTrace trace;
    trace.scenario = meta.scenario;
    trace.n = meta.n;
    trace.m = meta.m;
    trace.dt = meta.dt;
    trace.safety_radius = meta.safety_radius;
    trace.observed = meta.observed;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        trace.records.push_back(record_from(parse_row(line, cols.size(), line_no), meta));
    }
    return trace;
}

SimulationTrace read_csv(const std::string& path, const TraceMeta& meta)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return from_csv(ss.str(), meta);
    } catch (const Error& e) {
        throw e.with_context(path);
    }
}

}  // namespace safechain
