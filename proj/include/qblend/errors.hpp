#pragma once

#include <stdexcept>
#include <string>

namespace qblend {

/// Invalid user-supplied parameter (degree/element count/rule size out of range).
/// CLI maps this family to exit code 2.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation point outside the spline domain [0,1].
class DomainError : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

/// Numerical failure family; CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Matrix expected to be positive definite is not; carries the offending pivot.
class DefinitenessError : public NumericalError {
public:
    DefinitenessError(const std::string& what, int pivot)
        : NumericalError(what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}
    int pivot() const { return pivot_; }

private:
    int pivot_;
};

/// Dispersion relation has no root in (0, pi) for the requested wavenumber.
class OutOfBandError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Symbol series is degenerate (nonpositive leading stiffness coefficient,
/// or m(theta) <= 0 at the requested point).
class DegenerateSymbolError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A parameter search (optimal tau / optimal mass) has no admissible solution.
class NoSolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Requested feature outside supported limits (moment order, dense size, ...).
class UnsupportedError : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

} // namespace qblend
