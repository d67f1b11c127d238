#pragma once

#include <stdexcept>
#include <string>

namespace quasifix {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

struct EmptySampleSet : Error {
    using Error::Error;
};

struct DegeneratePair : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

struct InsufficientTrace : Error {
    using Error::Error;
};

struct ExpressionParseError : Error {
    using Error::Error;
};

struct ExpressionEvalError : Error {
    using Error::Error;
};

/// Malformed or inconsistent experiment configuration (CLI exit status 3).
struct ConfigError : Error {
    using Error::Error;
};

} // namespace quasifix
