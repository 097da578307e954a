#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "phav/pipeline.hpp"

namespace phav {

inline constexpr int kConfigSchemaVersion = 1;

/// Parses a flat `key = value` configuration. `[section]` lines prefix the
/// keys that follow with `section.`; `#` starts a comment; strings may be
/// quoted. `schema_version` is mandatory. Unknown keys, malformed lines and
/// out-of-range values raise ValidationError naming the line.
///
/// When `raman.tau_chi` is absent it is calibrated from
/// `raman.modulation_fraction` (default 0.05) and the phonon displacement.
ExperimentConfig parse_experiment_config(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Human-readable list of the accepted keys with units and defaults.
std::string experiment_config_schema();

}  // namespace phav
