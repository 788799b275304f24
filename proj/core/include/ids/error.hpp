#pragma once

#include <stdexcept>
#include <string>

namespace ids {

// Configuration problems: malformed config files, invalid parameter
// combinations, CLI misuse, locked output directories. Exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Data problems: missing or malformed input files, impossible sampling
// requests, classes too small for the requested fold count. Exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ids
