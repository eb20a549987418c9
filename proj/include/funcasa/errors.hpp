#pragma once

#include <stdexcept>
#include <string>

namespace funcasa {

/// Base of every error the toolkit throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (nonpositive s, singular T, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A mathematical precondition of the requested quantity is violated.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical engine failed to reach its tolerance. Carries the partial
/// estimate so callers can still report it.
class NumericError : public Error {
public:
    NumericError(const std::string& what, double partial_value = 0.0,
                 double partial_error = 0.0)
        : Error(what), partial_value_(partial_value), partial_error_(partial_error) {}

    double partial_value() const noexcept { return partial_value_; }
    double partial_error() const noexcept { return partial_error_; }

private:
    double partial_value_;
    double partial_error_;
};

/// Extremal search found no admissible candidate within its budget.
class SearchError : public Error {
public:
    using Error::Error;
};

}  // namespace funcasa
