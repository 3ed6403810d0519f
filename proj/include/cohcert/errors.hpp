#pragma once

#include <stdexcept>
#include <string>

namespace cohcert {

/// Input or construction-time validation failure (bad vector, bad matrix,
/// malformed request). Maps to CLI exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Operands have incompatible dimensions.
struct DimensionError : ValidationError {
    using ValidationError::ValidationError;
};

/// A majorization precondition does not hold (e.g. d is not majorized by
/// the requested spectrum).
struct MajorizationError : ValidationError {
    using ValidationError::ValidationError;
};

/// A constraint set or optimization problem has no feasible point.
/// Maps to CLI exit code 3.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numerical routine failed to converge or exceeded its scale limits.
/// Maps to CLI exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cohcert
