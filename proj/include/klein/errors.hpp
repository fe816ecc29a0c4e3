#pragma once

#include <stdexcept>
#include <string>

namespace klein {

// Input-domain errors: bad physical parameters, energies on a branch point,
// calling a solver outside its zone. CLI maps these to exit code 1.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BranchPointError : InputError {
    using InputError::InputError;
};

struct SubThresholdError : InputError {
    using InputError::InputError;
};

struct WrongZoneError : InputError {
    using InputError::InputError;
};

struct NonpositiveWidthError : InputError {
    using InputError::InputError;
};

// Numeric failures: integrator stalls, ill-conditioned projections,
// extrapolation that does not settle. CLI maps these to exit code 2.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StiffnessError : NumericError {
    using NumericError::NumericError;
};

struct ProjectionError : NumericError {
    using NumericError::NumericError;
};

struct NoConvergenceError : NumericError {
    using NumericError::NumericError;
};

struct GridTooNarrowError : NumericError {
    using NumericError::NumericError;
};

} // namespace klein
