#pragma once

#include <stdexcept>
#include <string>

namespace ecoamlp {

/// Invalid parameters, flags, or configuration documents. CLI exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unreadable, malformed, or inconsistent data. CLI exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ecoamlp
