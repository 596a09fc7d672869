#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

// Physics/domain violations: wavelength outside a validity window, spectra that
// cannot be analyzed, filters the grid cannot resolve. CLI maps these to exit 3.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: malformed config/CSV, missing files, inconsistent options.
// CLI maps these to exit 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical machinery failed: optimizer bracket not found, SVD non-convergence.
// CLI maps these to exit 4.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// API misuse (caller violated a documented precondition). Also exit 4.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace spdc
