#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mfcbf {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched vector sizes or particle counts.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Out-of-domain parameter (sigma <= 0, epsilon <= 0, dt <= 0, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// NaN/Inf encountered in states, controls or solver inputs.
class NumericalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Scenario document rejected. Carries every issue found, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> issues);

    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    std::vector<std::string> issues_;
};

}  // namespace mfcbf
