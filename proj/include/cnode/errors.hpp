#pragma once

#include <stdexcept>

namespace cnode {

// Base class for all library errors so the CLI can map them to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed argument or input data.
struct InvalidInputError : Error {
    using Error::Error;
};

// Every eigenvalue is zero: the channel carries no signal.
struct NoSignalPathError : Error {
    using Error::Error;
};

// snr below lambda_0^{-1}, where the capacity formula is undefined.
struct InfeasibleSnrError : Error {
    using Error::Error;
};

// Adaptive quadrature exhausted max_refinement above tolerance.
struct ConvergenceError : Error {
    using Error::Error;
};

// Grid extent too small for the symbol support.
struct TruncationError : Error {
    using Error::Error;
};

// Eigensolver or other numeric backend failure.
struct NumericError : Error {
    using Error::Error;
};

} // namespace cnode
