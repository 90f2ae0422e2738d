#pragma once

#include <stdexcept>
#include <string>

namespace cqad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Container sizes that do not line up.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Input object violates a stated invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Bad or incomplete configuration file. The CLI maps this to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Fit could not be set up or did not produce a usable answer.
class FitError : public Error {
public:
    using Error::Error;
};

/// Linear least-squares design matrix without full column rank.
class RankError : public FitError {
public:
    using FitError::FitError;
};

} // namespace cqad
