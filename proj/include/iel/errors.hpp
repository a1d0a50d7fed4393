#pragma once

#include <stdexcept>
#include <string>

namespace iel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration (bad axis, unsupported dimension, bad JSON key...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Operation not defined for the given input (e.g. Leray projection in 1D).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Non-finite values or runaway energy. Carries the last time at which the state was valid.
class BlowupError : public Error {
public:
    BlowupError(const std::string& what, double last_valid_time)
        : Error(what), last_valid_time_(last_valid_time) {}
    double last_valid_time() const { return last_valid_time_; }

private:
    double last_valid_time_;
};

/// Director collapsed (|d| < 0.5 somewhere): renormalization is meaningless.
class ConstraintError : public Error {
public:
    using Error::Error;
};

/// Not enough samples / snapshots for the requested computation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Time derivative requested without a field history.
class MissingHistoryError : public Error {
public:
    using Error::Error;
};

/// An inequality probe found RHS = 0 with LHS != 0.
class ProbeFailure : public Error {
public:
    using Error::Error;
};

/// File system or format problems; the message names the path.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace iel
