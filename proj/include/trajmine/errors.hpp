#ifndef TRAJMINE_ERRORS_HPP
#define TRAJMINE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace trajmine {

// Invalid configuration or command-line usage. CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or unusable input data. CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace trajmine

#endif
