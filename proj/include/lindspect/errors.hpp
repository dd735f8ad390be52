#pragma once

#include <stdexcept>

namespace lindspect {

// Numerical failures. Shape and configuration problems use
// std::invalid_argument; everything below signals that a computation could
// not meet its accuracy contract.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergenceError : NumericalError {
    using NumericalError::NumericalError;
};

struct NotPsdError : NumericalError {
    using NumericalError::NumericalError;
};

struct DefectiveError : NumericalError {
    using NumericalError::NumericalError;
};

struct NoSteadyModeError : NumericalError {
    using NumericalError::NumericalError;
};

struct ConditionFailedError : NumericalError {
    using NumericalError::NumericalError;
};

struct StepTooLargeError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace lindspect
