#pragma once

#include <stdexcept>
#include <string>

namespace capalloc {

/// Malformed configuration, policy file or argument. CLI exit code 2.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// State space too large for the index type or for the requested operation.
/// CLI exit code 3.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Linear solve failed or its residual exceeds the contract. CLI exit code 4.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A caller broke a precondition (e.g. an infeasible action was passed in).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace capalloc
