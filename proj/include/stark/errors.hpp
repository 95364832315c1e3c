#pragma once

#include <stdexcept>
#include <string>

namespace stark {

/// Base of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument (non-finite value, index out of its domain, bad parameter).
class InputError : public Error {
public:
    using Error::Error;
};

/// Argument outside the documented evaluation range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Quadrature, integrator or root finder failed to meet its tolerance.
class NumericError : public Error {
public:
    using Error::Error;
};

/// An iterative series did not converge within its term budget.
class ConvergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

/// No sign change of the secular function inside the search bracket.
class BracketError : public NumericError {
public:
    using NumericError::NumericError;
};

/// More than one sign change inside a bracket that should isolate one root.
class AmbiguityError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Two independent computations of the same quantity disagree.
class ConsistencyError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Truncation radius could not be pushed far enough to make the potential tail negligible.
class TailError : public NumericError {
public:
    using NumericError::NumericError;
};

/// A potential is not in the weighted space requested (a divergent moment).
class MembershipError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. Carries the 1-based line and the offending field.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, std::string field)
        : Error(what), line_(line), field_(std::move(field)) {}
    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

}  // namespace stark
