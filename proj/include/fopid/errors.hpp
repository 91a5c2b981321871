#pragma once

#include <stdexcept>

namespace fopid {

// Base type for every failure this library reports.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The bilinear map degenerated (2/Ts coincides with a denominator root).
struct DiscretizationError : Error {
    using Error::Error;
};

// A leading convolution coefficient is too small to invert through.
struct SingularityError : Error {
    using Error::Error;
};

// Feedback interconnection is algebraically ill-posed (1 + p0*c0 == 0).
struct AlgebraicLoopError : Error {
    using Error::Error;
};

// A computation produced inf/NaN where a finite value is required.
struct NonFiniteError : Error {
    using Error::Error;
};

// Recorded data violates the tuning assumptions (e.g. u[0] == 0).
struct DataInvalidError : Error {
    using Error::Error;
};

// Malformed config file, CSV, or command-line input.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace fopid
