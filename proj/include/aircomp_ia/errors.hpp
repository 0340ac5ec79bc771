#pragma once

#include <stdexcept>
#include <string>

namespace aircomp_ia {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A structural constraint on the network layout is violated.
struct ConstraintViolation : Error {
    using Error::Error;
};

/// A vector/matrix dimension does not match what the operation requires.
struct DimensionError : Error {
    using Error::Error;
};

/// A parameter value is outside its admissible range.
struct InvalidParams : Error {
    using Error::Error;
};

/// The requested combination of scalar mode and operation is not supported.
struct UnsupportedMode : Error {
    using Error::Error;
};

/// A channel diagonal entry is zero, so the required inverse does not exist.
struct SingularChannel : Error {
    using Error::Error;
};

/// A requested construction would exceed a configured size cap.
struct SizeOverflow : Error {
    using Error::Error;
};

/// An interference term has no matching generator; the construction is broken.
struct ContainmentFailure : Error {
    using Error::Error;
};

/// The signal-plus-interference matrix failed its rank check.
struct RankDeficient : Error {
    using Error::Error;
};

/// A numeric decomposition failed to converge or produced unusable output.
struct NumericalFailure : Error {
    using Error::Error;
};

/// Config text could not be parsed; message carries the line number.
struct ParseError : Error {
    using Error::Error;
};

/// Config parsed but violates a documented constraint.
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace aircomp_ia
