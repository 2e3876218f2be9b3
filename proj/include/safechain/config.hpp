#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "safechain/sim.hpp"

namespace safechain {

// Command-line values applied on top of the config file.
struct ConfigOverrides {
    std::optional<std::string> scenario;
    std::optional<double> dt;
    std::optional<double> duration;
};

// Builds a scenario from a JSON document. Unknown keys are rejected; the
// scenario defaults fill everything that is not given. Gain-condition
// warnings end up in SimConfig::warnings.
SimConfig config_from_json(const nlohmann::json& doc, const ConfigOverrides& overrides = {});

SimConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides = {});
SimConfig parse_config(const std::string& path, const ConfigOverrides& overrides = {});

// Scenario defaults with only the overrides applied.
SimConfig scenario_config(const std::string& key, const ConfigOverrides& overrides = {});

}  // namespace safechain
