#pragma once

#include <cmath>
#include <string>

#include "trp/errors.hpp"

namespace trp {

/// Dimensionless description of one quartic TRP sweep. lambda is the
/// inversion rate, eta4 the twist strength, and the sweep runs over
/// tau in [-tau0, +tau0]. That window is the one that reproduces the
/// published best-point gates at their quoted tau0 values.
struct SweepParams {
    double lambda = 0.0;
    double eta4 = 0.0;
    double tau0 = 0.0;

    /// lambda > 1 is the non-adiabatic regime; recorded, never rejected.
    bool non_adiabatic() const { return lambda > 1.0; }

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(std::isfinite(v) && v > 0.0))
                throw InputError(std::string("sweep parameter ") + name +
                                 " must be positive and finite, got " + std::to_string(v));
        };
        positive(lambda, "lambda");
        positive(eta4, "eta4");
        positive(tau0, "tau0");
    }
};

/// SweepParams plus the coupling/shift constants of the two-qubit
/// Hamiltonian: d1 Larmor-frequency difference, d2 frequency shift,
/// d3 rf-amplitude ratio, d4 Ising coupling, c4 degeneracy-breaking shift.
struct TwoQubitParams {
    SweepParams sweep;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
    double d4 = 0.0;
    double c4 = 0.0;

    void validate() const {
        sweep.validate();
        auto finite = [](double v, const char* name) {
            if (!std::isfinite(v))
                throw InputError(std::string("two-qubit parameter ") + name +
                                 " must be finite, got " + std::to_string(v));
        };
        finite(d1, "d1");
        finite(d2, "d2");
        finite(d3, "d3");
        finite(d4, "d4");
        finite(c4, "c4");
    }
};

}  // namespace trp
