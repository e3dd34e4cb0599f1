#pragma once

#include <stdexcept>
#include <string>

namespace mcout {

// Every failure raised by the library derives from Error so callers (and the
// CLI) can catch one type and still tell the categories apart.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shape mismatch between a chain and a block or between matrices.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Non-finite or otherwise unusable input values.
class DataError : public Error {
public:
    using Error::Error;
};

// Out-of-range tuning parameter (m = 0, odd flat-top batch, |rho| >= 1, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Too few rows for the requested estimator.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// Constant columns, all-identical indicators and similar zero-spread inputs.
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

// A covariance estimate without a positive determinant where one is needed.
class SingularEstimateError : public Error {
public:
    using Error::Error;
};

// Hotelling degrees of freedom q <= p.
class DegreesOfFreedomError : public Error {
public:
    using Error::Error;
};

// Root finder or special function failed to converge.
class NumericsError : public Error {
public:
    using Error::Error;
};

// Malformed delimited-text input; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace mcout
