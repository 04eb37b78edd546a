#pragma once

#include <string>

#include "mmgeo/montecarlo.hpp"
#include "mmgeo/scenario.hpp"

namespace mmgeo {

/// Everything a batch run needs: the physical scenario plus the Monte Carlo
/// scene/estimator settings.
struct RunConfig {
    Scenario scenario;
    SceneConfig scene;
};

/// Parses flat "key = value" text: one pair per line, '#' starts a comment,
/// blank lines ignored. Missing keys keep their defaults. Angles use *_deg
/// keys, decibel quantities *_db / *_dbw keys, everything else SI units.
/// Unknown keys, malformed values and range violations throw config_error
/// naming the key and 1-based line; cross-field violations throw
/// config_error after parsing.
RunConfig parse_config_text(const std::string& text);

/// Reads and parses a file; io_error carries the path.
RunConfig load_config(const std::string& path);

/// Canonical text form; parsing it back reproduces the configuration
/// exactly (degree/dB fields are printed with inverse-exact values).
std::string serialize_config(const RunConfig& c);

/// Applies a numeric scenario key (same names and units as the config file)
/// for parameter sweeps. Returns false for keys that are not sweepable
/// scenario scalars.
bool apply_sweep_value(RunConfig& cfg, const std::string& key, double value);

}  // namespace mmgeo
