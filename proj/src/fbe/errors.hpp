#pragma once

#include <stdexcept>
#include <string>

namespace fbe {

/// Invalid configuration or inconsistent call arguments (bad grid size,
/// parameter out of range, mismatched lengths).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite values produced during computation (NaN/Inf in a field or
/// intermediate result).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A least-squares fit could not be completed (degenerate data or the
/// optimizer exhausted its iteration budget).
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fbe
