#pragma once

#include <stdexcept>
#include <string>

namespace qclock {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A closed-form evaluation left the representable double range.
class NumericRangeError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A value object was handed in with a broken invariant (e.g. a spinor that is not normalized).
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// Configuration rejected by validation; the message names the violated rule.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration text.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// The adaptive integrator ran out of refinement depth.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double achieved_error)
        : Error(what), estimate_(best_estimate), error_(achieved_error) {}

    double best_estimate() const noexcept { return estimate_; }
    double achieved_error() const noexcept { return error_; }

private:
    double estimate_;
    double error_;
};

/// The requested operation is not defined for the chosen arrival scheme.
class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

/// The distribution cannot be normalized (zero or non-finite total weight).
class DegenerateDistribution : public Error {
public:
    using Error::Error;
};

/// Reading or writing an output file failed.
class IoError : public Error {
public:
    using Error::Error;
};

/// The maximum of a distribution is not isolated.
class AmbiguousPeak : public Error {
public:
    using Error::Error;
};

} // namespace qclock
