#pragma once

#include <stdexcept>
#include <string>

namespace aoi {

/// Thrown when a closed-form evaluation produces a value outside its
/// mathematically guaranteed range (e.g. a probability outside (0,1)).
/// This signals a convention or formula bug, never bad user input.
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a simulation configuration cannot produce a valid run
/// (trace exhausted, empty measurement window, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aoi
