#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "trp/errors.hpp"
#include "trp/linalg.hpp"

namespace trp {

/// Target gates. The TRP targets are the universal set
/// {hadamard, not, vp, vpi8, vcp}; the rest exist for the composition
/// identities and CLI checks.
enum class Gate {
    hadamard,
    phase,
    pi8,
    not_gate,
    cnot,
    cp,
    vp,
    vpi8,
    vcp,
    sigma_z,
    identity
};

inline std::size_t gate_dim(Gate g) {
    switch (g) {
        case Gate::cnot:
        case Gate::cp:
        case Gate::vcp:
            return 4;
        default:
            return 2;
    }
}

inline std::string_view gate_name(Gate g) {
    switch (g) {
        case Gate::hadamard: return "hadamard";
        case Gate::phase: return "phase";
        case Gate::pi8: return "pi8";
        case Gate::not_gate: return "not";
        case Gate::cnot: return "cnot";
        case Gate::cp: return "cp";
        case Gate::vp: return "vp";
        case Gate::vpi8: return "vpi8";
        case Gate::vcp: return "vcp";
        case Gate::sigma_z: return "sigma_z";
        case Gate::identity: return "identity";
    }
    return "?";
}

inline Gate gate_from_name(std::string_view name) {
    for (Gate g : {Gate::hadamard, Gate::phase, Gate::pi8, Gate::not_gate, Gate::cnot, Gate::cp,
                   Gate::vp, Gate::vpi8, Gate::vcp, Gate::sigma_z, Gate::identity})
        if (name == gate_name(g)) return g;
    throw InputError("unknown gate name '" + std::string(name) + "'");
}

inline cmat<2> target_1q(Gate g) {
    cmat<2> m;
    const double s = 1.0 / std::sqrt(2.0);
    switch (g) {
        case Gate::hadamard:
            m(0, 0) = s; m(0, 1) = s;
            m(1, 0) = s; m(1, 1) = -s;
            return m;
        case Gate::phase:
            m(0, 0) = 1.0;
            m(1, 1) = cplx(0.0, 1.0);
            return m;
        case Gate::pi8:
            m(0, 0) = 1.0;
            m(1, 1) = std::polar(1.0, pi / 4.0);
            return m;
        case Gate::not_gate:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            return m;
        case Gate::vp:
            m(0, 1) = std::polar(1.0, pi / 4.0);
            m(1, 0) = std::polar(1.0, -pi / 4.0);
            return m;
        case Gate::vpi8:
            m(0, 1) = std::polar(1.0, pi / 8.0);
            m(1, 0) = std::polar(1.0, -pi / 8.0);
            return m;
        case Gate::sigma_z:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            return m;
        case Gate::identity:
            return cmat<2>::identity();
        default:
            throw InputError("gate '" + std::string(gate_name(g)) + "' is not one-qubit");
    }
}

inline cmat<4> target_2q(Gate g) {
    cmat<4> m;
    switch (g) {
        case Gate::cnot:
            m(0, 0) = 1.0;
            m(1, 1) = 1.0;
            m(2, 3) = 1.0;
            m(3, 2) = 1.0;
            return m;
        case Gate::cp:
            m(0, 0) = 1.0;
            m(1, 1) = 1.0;
            m(2, 2) = 1.0;
            m(3, 3) = -1.0;
            return m;
        case Gate::vcp:
            m(0, 0) = 1.0;
            m(1, 1) = 1.0;
            m(2, 2) = -1.0;
            m(3, 3) = 1.0;
            return m;
        default:
            throw InputError("gate '" + std::string(gate_name(g)) + "' is not two-qubit");
    }
}

/// Residuals of the composition identities that make the TRP set universal:
///   U_P    = e^{i pi/4} U_NOT V_P
///   U_pi/8 = e^{i pi/8} U_NOT V_pi8
///   U_CNOT = (I x U_H) [(sigma_z x I) V_CP] (I x U_H)
///   sigma_z = U_P^2
struct UniversalityReport {
    double phase_residual = 0.0;
    double pi8_residual = 0.0;
    double cnot_residual = 0.0;
    double sigma_z_residual = 0.0;

    double max_residual() const {
        return std::max(std::max(phase_residual, pi8_residual),
                        std::max(cnot_residual, sigma_z_residual));
    }
};

inline UniversalityReport verify_universality() {
    UniversalityReport r;

    const cmat<2> up = target_1q(Gate::phase);
    const cmat<2> unot = target_1q(Gate::not_gate);
    r.phase_residual =
        frobenius_norm(up - std::polar(1.0, pi / 4.0) * (unot * target_1q(Gate::vp)));
    r.pi8_residual = frobenius_norm(target_1q(Gate::pi8) -
                                    std::polar(1.0, pi / 8.0) * (unot * target_1q(Gate::vpi8)));

    const cmat<4> ixh = kron(pauli::id(), target_1q(Gate::hadamard));
    const cmat<4> zxi = kron(target_1q(Gate::sigma_z), pauli::id());
    r.cnot_residual =
        frobenius_norm(target_2q(Gate::cnot) - ixh * (zxi * target_2q(Gate::vcp)) * ixh);

    r.sigma_z_residual = frobenius_norm(target_1q(Gate::sigma_z) - up * up);
    return r;
}

}  // namespace trp
