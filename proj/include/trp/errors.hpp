#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trp {

/// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad user input: invalid parameters, malformed config, unknown keys.
struct InputError : Error {
    using Error::Error;
};

/// A numerical procedure failed to meet its contract.
struct NumericalError : Error {
    using Error::Error;
};

struct EigenConvergenceError : NumericalError {
    double off_diagonal;
    explicit EigenConvergenceError(double off)
        : NumericalError("eigensolver failed to converge, off-diagonal residual " +
                         std::to_string(off)),
          off_diagonal(off) {}
};

/// Two instantaneous levels are too close for the coupling matrix to be
/// well conditioned.
struct NearDegeneracyError : NumericalError {
    std::size_t level_lo, level_hi;
    double gap;
    NearDegeneracyError(std::size_t lo, std::size_t hi, double g)
        : NumericalError("near-degenerate levels " + std::to_string(lo) + " and " +
                         std::to_string(hi) + ", gap " + std::to_string(g)),
          level_lo(lo),
          level_hi(hi),
          gap(g) {}
};

/// Frame-to-frame level matching was ambiguous; the integrator should
/// retry with a smaller step.
struct StepTooLargeError : NumericalError {
    using NumericalError::NumericalError;
};

struct IntegrationError : NumericalError {
    double last_tau;
    IntegrationError(const std::string& what, double tau)
        : NumericalError(what + " (last good tau = " + std::to_string(tau) + ")"),
          last_tau(tau) {}
};

/// Accepted solution drifted outside the accuracy contract.
struct AccuracyError : NumericalError {
    double drift;
    explicit AccuracyError(double d)
        : NumericalError("norm drift " + std::to_string(d) + " exceeds tolerance"),
          drift(d) {}
};

}  // namespace trp
