#pragma once

#include <stdexcept>
#include <string>

namespace mmgeo {

/// Base class for all mmgeo errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Degenerate or contradictory geometric input (zero-length face, query point
/// on a mirror line, lobe test against the apex itself, ...).
struct geometry_error : error {
    using error::error;
};

/// Scenario or model parameters outside the modelled regime (negative human
/// thinning factor, degenerate image-model denominators, ...).
struct scenario_error : error {
    using error::error;
};

/// Evaluation request outside a function's support (e.g. a delay earlier than
/// the geometric minimum).
struct domain_error : error {
    using error::error;
};

/// Quadrature / iteration failed to converge, or produced a non-finite value
/// where a finite one is required.
struct numerical_error : error {
    using error::error;
};

/// Configuration file problem; carries the offending key and 1-based line.
struct config_error : error {
    std::string key;
    int line = 0;
    config_error(const std::string& msg, std::string key_, int line_)
        : error(msg), key(std::move(key_)), line(line_) {}
};

/// Filesystem / stream failure.
struct io_error : error {
    using error::error;
};

}  // namespace mmgeo
