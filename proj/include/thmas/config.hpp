#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "thmas/engine.hpp"

// JSON (de)serialization and validation of ScenarioConfig, plus the dotted
// key=value override mechanism used by the CLI.

namespace thmas {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The config file does not exist or cannot be opened.
class ConfigFileError : public ConfigError {
  using ConfigError::ConfigError;
};

// Malformed JSON, a missing/mistyped field, or an unknown field.
class ConfigParseError : public ConfigError {
  using ConfigError::ConfigError;
};

// A structurally valid config that violates a scenario invariant.
class ConfigValidationError : public ConfigError {
 public:
  ConfigValidationError(std::string field, const std::string& message)
      : ConfigError(message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Strict parse: required fields N, w, k_fb, Ts, M, x0, schedule; optional
// name, quantized (false), c (3), leader_scale (1.0); unknown fields are
// rejected. Does not validate invariants (see validate_config).
ScenarioConfig parse_config_json(const nlohmann::json& j);

nlohmann::json config_json(const ScenarioConfig& cfg);

// Parse + validate from a file. Throws ConfigFileError / ConfigParseError /
// ConfigValidationError, each naming what went wrong.
ScenarioConfig parse_config_file(const std::string& path);

// Checks every scenario invariant (field names appear in the error): sigma
// range, M >= 1, Ts > 0, x0 length, nonempty schedule, w != 0, and for
// continuous (non-quantized) inputs the gain bound 0 < k_fb < 1/(d_max*|w|)
// over the worst family in the schedule; quantized inputs only need k_fb > 0,
// since the law then enters through sign(u) alone.
void validate_config(const ScenarioConfig& cfg);

// Applies "dotted.path=value" into a config JSON object before parsing.
// Numeric path segments index arrays. Values parse as JSON when possible and
// fall back to strings. Throws ConfigParseError on malformed overrides.
void apply_override(nlohmann::json& j, const std::string& key_value);

}  // namespace thmas
