// errors.hpp — Exception types raised by the sdprobe numerical pipeline

#pragma once

#include <stdexcept>
#include <string>

namespace sdprobe {

// Adaptive quadrature exhausted its panel budget before meeting tolerance.
struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spectral weight captured by the inversion window does not sum to one.
struct WindowTooNarrow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Time integration drifted beyond the requested norm tolerance.
struct StepperFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingUncertainty : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed CSV/JSON input.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sdprobe
