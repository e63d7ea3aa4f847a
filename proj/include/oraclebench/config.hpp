#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "oraclebench/harness.hpp"

namespace oraclebench {

/// Parses JSON text into a tree; syntax errors become ConfigError("config").
nlohmann::json parse_config_text(const std::string& text);
nlohmann::json load_config_file(const std::string& path);

/// Applies "dotted.key=value". The value is read as JSON when it parses,
/// and as a plain string otherwise; missing objects along the path are created.
void apply_override(nlohmann::json& tree, const std::string& assignment);

/// Replaces masterSeed by a decimal 64-bit seed string.
void apply_seed_override(nlohmann::json& tree, const std::string& seed,
                         const std::string& source = "ORACLEBENCH_SEED");

/// Converts and validates; unknown keys and type mismatches name the field.
ScenarioConfig config_from_json(const nlohmann::json& tree);
nlohmann::json config_to_json(const ScenarioConfig& config);

/// File values, then the seed override, then each assignment in order.
ScenarioConfig resolve_config(nlohmann::json tree, const std::optional<std::string>& seedOverride,
                              const std::vector<std::string>& assignments);

}  // namespace oraclebench
