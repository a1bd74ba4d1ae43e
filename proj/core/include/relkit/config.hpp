#pragma once

#include <string>

#include "relkit/experiment.hpp"

namespace relkit {

/// Parses an ExperimentConfig from a JSON document. Field names mirror the
/// struct; unknown fields and out-of-range values raise InvalidArgument naming
/// the field. A run manifest (an object with "tool": "relkit" and an embedded
/// "config") is accepted and unwrapped, so a previous run can be repeated from
/// its manifest alone.
ExperimentConfig parse_experiment_config(const std::string& json_text);

/// Reads and parses a config file; throws IoError if unreadable.
ExperimentConfig load_experiment_config(const std::string& path);

/// Serializes a config back to JSON (round-trips through the parser).
std::string experiment_config_to_json(const ExperimentConfig& config, int indent = 2);

}  // namespace relkit
