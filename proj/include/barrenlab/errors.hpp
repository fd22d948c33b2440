#pragma once

#include <stdexcept>
#include <string>

namespace barrenlab {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidResidueError : Error {
    using Error::Error;
};

struct BitOutOfRangeError : Error {
    using Error::Error;
};

struct ZeroFrequencyError : Error {
    using Error::Error;
};

struct ConventionViolationError : Error {
    using Error::Error;
};

struct HypothesisViolationError : Error {
    using Error::Error;
};

struct SizeLimitError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace barrenlab
