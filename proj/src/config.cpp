#include "safechain/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "safechain/error.hpp"
#include "safechain/scenarios.hpp"

namespace safechain {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg)
{
    throw Error(ErrorKind::Config, msg);
}

void require_object(const json& j, const std::string& where)
{
    if (!j.is_object())
        fail(where + " must be a JSON object");
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
        if (!known)
            fail("unknown key '" + where + it.key() + "'");
    }
}

double number(const json& j, const std::string& name)
{
    if (!j.is_number())
        fail("'" + name + "' must be a number");
    return j.get<double>();
}

bool boolean(const json& j, const std::string& name)
{
    if (!j.is_boolean())
        fail("'" + name + "' must be true or false");
    return j.get<bool>();
}

std::vector<double> numbers(const json& j, const std::string& name)
{
    if (!j.is_array())
        fail("'" + name + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : j)
        out.push_back(number(e, name));
    return out;
}

Vec vec_of(const json& j, const std::string& name, Eigen::Index size)
{
    const auto v = numbers(j, name);
    if (static_cast<Eigen::Index>(v.size()) != size)
        fail("'" + name + "' needs " + std::to_string(size) + " entries");
    return Eigen::Map<const Vec>(v.data(), size);
}

void read_num(const json& obj, const char* key, const std::string& prefix, double& dst)
{
    if (obj.contains(key))
        dst = number(obj[key], prefix + key);
}

void read_bool(const json& obj, const char* key, const std::string& prefix, bool& dst)
{
    if (obj.contains(key))
        dst = boolean(obj[key], prefix + key);
}

GainFunction parse_gain(const json& j)
{
    require_object(j, "gain_fn");
    if (!j.contains("family") || !j["family"].is_string())
        fail("'gain_fn.family' must be a string");
    const auto family = j["family"].get<std::string>();
    if (family == "linear") {
        reject_unknown(j, "gain_fn.", {"family"});
        return GainFunction::linear();
    }
    if (family == "polynomial") {
        reject_unknown(j, "gain_fn.", {"family", "p"});
        if (!j.contains("p"))
            fail("'gain_fn.p' is required for the polynomial family");
        return GainFunction::polynomial(number(j["p"], "gain_fn.p"));
    }
    if (family == "exponential") {
        reject_unknown(j, "gain_fn.", {"family", "a", "alpha"});
        double a = 1.0, alpha = 1.0;
        read_num(j, "a", "gain_fn.", a);
        read_num(j, "alpha", "gain_fn.", alpha);
        return GainFunction::exponential(a, alpha);
    }
    if (family == "prescribed_time")
        fail("gain family 'prescribed_time' is singular at its horizon and is not supported");
    fail("unknown gain family '" + family + "'");
}

BarrierMode parse_mode(const json& j)
{
    if (!j.is_string())
        fail("'barrier.mode' must be a string");
    const auto s = j.get<std::string>();
    if (s == "nominal")
        return BarrierMode::Nominal;
    if (s == "worst_case")
        return BarrierMode::WorstCase;
    if (s == "observer")
        return BarrierMode::Observer;
    fail("unknown barrier mode '" + s + "'");
}

// Fields shared by both scenario parameter structs.
template <class Params>
void read_common(const json& doc, Params& p, std::optional<BarrierMode>& mode, std::optional<double>& bound)
{
    read_num(doc, "dt", "", p.dt);
    read_num(doc, "duration", "", p.duration);
    read_bool(doc, "filter", "", p.filter_enabled);
    read_bool(doc, "sampled_decay", "", p.sampled_decay);
    if (doc.contains("observer_substeps")) {
        const double s = number(doc["observer_substeps"], "observer_substeps");
        if (s != static_cast<int>(s) || s < 1)
            fail("'observer_substeps' must be a positive integer");
        p.observer_substeps = static_cast<int>(s);
    }

    if (doc.contains("barrier")) {
        const auto& b = doc["barrier"];
        require_object(b, "barrier");
        reject_unknown(b, "barrier.", {"rho", "theta", "mu", "mode", "rho_margin", "auto_rho", "disturbance_bound"});
        if (b.contains("rho"))
            p.rho = numbers(b["rho"], "barrier.rho");
        read_num(b, "theta", "barrier.", p.theta);
        if (b.contains("mu"))
            p.mu = numbers(b["mu"], "barrier.mu");
        if (b.contains("mode"))
            mode = parse_mode(b["mode"]);
        read_num(b, "rho_margin", "barrier.", p.rho_margin);
        read_bool(b, "auto_rho", "barrier.", p.auto_rho);
        if (b.contains("disturbance_bound"))
            bound = number(b["disturbance_bound"], "barrier.disturbance_bound");
    }
    if (doc.contains("gain_fn"))
        p.gain = parse_gain(doc["gain_fn"]);
    if (doc.contains("observer")) {
        const auto& o = doc["observer"];
        require_object(o, "observer");
        reject_unknown(o, "observer.", {"lambda0", "lambda1", "k1", "k2", "varsigma_bar"});
        read_num(o, "lambda0", "observer.", p.observer.lambda0);
        read_num(o, "lambda1", "observer.", p.observer.lambda1);
        read_num(o, "k1", "observer.", p.observer.k1);
        read_num(o, "k2", "observer.", p.observer.k2);
        read_num(o, "varsigma_bar", "observer.", p.varsigma_bar);
    }
}

SimConfig build_vehicle(const json& doc, VehicleMode mode)
{
    if (doc.contains("worked_example"))
        fail("'worked_example' block given for a vehicle scenario");
    VehicleParams p;
    std::optional<BarrierMode> barrier_mode;
    std::optional<double> bound;
    read_common(doc, p, barrier_mode, bound);
    const BarrierMode expected = mode == VehicleMode::DORCBF ? BarrierMode::Observer : BarrierMode::Nominal;
    if (barrier_mode && *barrier_mode != expected)
        fail(std::string("vehicle scenario fixes barrier.mode to '") + to_string(expected) + "'");
    if (bound)
        fail("'barrier.disturbance_bound' only applies to worst_case mode");
    if (doc.contains("vehicle")) {
        const auto& v = doc["vehicle"];
        require_object(v, "vehicle");
        reject_unknown(v, "vehicle.", {"x0", "obstacle0", "radius", "static_obstacle"});
        if (v.contains("x0"))
            p.x0 = VehicleState::from_vec(vec_of(v["x0"], "vehicle.x0", 4));
        if (v.contains("obstacle0"))
            p.obstacle0 = ObstacleState::from_vec(vec_of(v["obstacle0"], "vehicle.obstacle0", 3));
        read_num(v, "radius", "vehicle.", p.radius);
        read_bool(v, "static_obstacle", "vehicle.", p.static_obstacle);
        if (!(p.radius > 0.0))
            fail("'vehicle.radius' must be positive");
    }
    return build_vehicle_scenario(mode, p);
}

SimConfig build_worked(const json& doc)
{
    if (doc.contains("vehicle"))
        fail("'vehicle' block given for the worked example");
    WorkedExampleParams p;
    std::optional<BarrierMode> barrier_mode;
    std::optional<double> bound;
    read_common(doc, p, barrier_mode, bound);
    if (barrier_mode)
        p.mode = *barrier_mode;
    if (doc.contains("worked_example")) {
        const auto& w = doc["worked_example"];
        require_object(w, "worked_example");
        reject_unknown(w, "worked_example.", {"x0", "d1_amp", "d2_amp", "d3", "target", "center", "radius"});
        if (w.contains("x0"))
            p.x0 = vec_of(w["x0"], "worked_example.x0", 3);
        read_num(w, "d1_amp", "worked_example.", p.d1_amp);
        read_num(w, "d2_amp", "worked_example.", p.d2_amp);
        read_num(w, "d3", "worked_example.", p.d3);
        read_num(w, "target", "worked_example.", p.target);
        read_num(w, "center", "worked_example.", p.center);
        read_num(w, "radius", "worked_example.", p.radius);
        if (!(p.radius > 0.0))
            fail("'worked_example.radius' must be positive");
    }
    SimConfig cfg = build_worked_example_scenario(p);
    if (bound) {
        cfg.barrier.disturbance_bound = *bound;
        finalize_config(cfg);
    }
    return cfg;
}

}  // namespace

SimConfig config_from_json(const json& input, const ConfigOverrides& overrides)
{
    require_object(input, "config");
    json doc = input;
    reject_unknown(doc, "",
                   {"scenario", "dt", "duration", "filter", "sampled_decay", "observer_substeps", "barrier", "gain_fn",
                    "observer", "vehicle", "worked_example"});
    if (overrides.scenario)
        doc["scenario"] = *overrides.scenario;
    if (overrides.dt)
        doc["dt"] = *overrides.dt;
    if (overrides.duration)
        doc["duration"] = *overrides.duration;
    if (!doc.contains("scenario") || !doc["scenario"].is_string())
        fail("'scenario' must name one of the built-in scenarios");

    const auto key = doc["scenario"].get<std::string>();
    if (key == "vehicle_dorcbf")
        return build_vehicle(doc, VehicleMode::DORCBF);
    if (key == "vehicle_bcbf")
        return build_vehicle(doc, VehicleMode::BCBF);
    if (key == "worked_example_n3")
        return build_worked(doc);
    fail("unknown scenario '" + key + "'");
}

SimConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(doc, overrides);
}

SimConfig parse_config(const std::string& path, const ConfigOverrides& overrides)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config_text(ss.str(), overrides);
    } catch (const Error& e) {
        throw e.with_context(path);
    }
}

SimConfig scenario_config(const std::string& key, const ConfigOverrides& overrides)
{
    ConfigOverrides o = overrides;
    o.scenario = key;
    return config_from_json(json::object(), o);
}

}  // namespace safechain
