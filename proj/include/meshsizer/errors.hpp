#pragma once

#include <stdexcept>
#include <string>

namespace meshsizer {

/// Bad command usage or malformed configuration. CLI exit code 1.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File access, parse, or content-validation failure. CLI exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: divergence, singular system, invalid state. CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace meshsizer
