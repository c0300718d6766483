#pragma once

#include <stdexcept>
#include <string>

namespace spillover {

/// Malformed or inconsistent input data (CSV parse errors, calendar
/// mismatches, degenerate series). Maps to process exit code 3.
struct data_error : std::runtime_error {
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration (bad flag values, unknown keys, out-of-range
/// parameters). Maps to process exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (singular regression, non-PD matrix after guards,
/// optimizer breakdown). Maps to process exit code 4.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spillover
