#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "mmgeo/config.hpp"

namespace mmgeo {

enum class RunMode { Analyze, Simulate, Compare };

struct SweepSpec {
    std::string key;  ///< scenario field, config-file units
    double start = 0.0;
    double stop = 0.0;
    int steps = 2;  ///< inclusive endpoints; must be >= 2
};

struct RunSpec {
    RunMode mode = RunMode::Analyze;
    std::string config_path;
    std::optional<SweepSpec> sweep;
    std::optional<std::uint64_t> seed;          ///< overrides the config
    std::optional<std::uint64_t> realizations;  ///< overrides the config
    std::string out_path;
};

/// Executes the run and writes the CSV artifact ("# schema=1" header line,
/// one data row per sweep step, "inf"/"nan" tokens for non-finite cells).
/// Progress and errors go to `log`. Returns the process exit code:
/// 0 ok, 2 configuration error, 3 numerical error, 4 I/O error.
int run(const RunSpec& spec, std::ostream& log);

}  // namespace mmgeo
