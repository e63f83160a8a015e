#pragma once

#include <stdexcept>
#include <string>

namespace nacnet {

/// Malformed input text (bad header, bad cell, wrong count). Carries a
/// message that names the offending line where possible.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Semantically invalid data (capacity violations, missing nodes,
/// degenerate datasets, NaN loss).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad configuration values or unknown config keys.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace nacnet
