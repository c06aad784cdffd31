#pragma once

#include <cmath>
#include <vector>

#include "trp/linalg.hpp"
#include "trp/sweep.hpp"

namespace trp {

/// Quartic twist profile phi4(tau) = (eta4 / 2 lambda) tau^4.
inline double twist_phi4(double tau, const SweepParams& p) {
    const double t2 = tau * tau;
    return (p.eta4 / (2.0 * p.lambda)) * t2 * t2;
}

/// d phi4 / d tau = (2 eta4 / lambda) tau^3.
inline double twist_phi4_rate(double tau, const SweepParams& p) {
    return (2.0 * p.eta4 / p.lambda) * tau * tau * tau;
}

/// One-qubit sweep Hamiltonian
///   H1(tau) = -(tau/lambda) sigma_z - (1/lambda)[cos phi4 sigma_x - sin phi4 sigma_y].
/// The twist sense (the sigma_y sign) is the one that yields the three-root
/// resonance condition tau = eta4 tau^3 and reproduces the published gate
/// values. Hermitian by construction: the lower triangle is the exact
/// conjugate of the upper.
inline cmat<2> h1(double tau, const SweepParams& p) {
    const double phi = twist_phi4(tau, p);
    const double z = -tau / p.lambda;
    // off-diagonal (0,1) entry of tx*sigma_x + ty*sigma_y is tx - i*ty
    const cplx off = (-1.0 / p.lambda) * std::polar(1.0, phi);
    cmat<2> h;
    h(0, 0) = z;
    h(1, 1) = -z;
    h(0, 1) = off;
    h(1, 0) = std::conj(off);
    return h;
}

/// Analytic dH1/dtau (Hellmann-Feynman input for the coupling matrix).
inline cmat<2> dh_dtau(double tau, const SweepParams& p) {
    const double phi = twist_phi4(tau, p);
    const double rate = twist_phi4_rate(tau, p);
    // d/dtau of -(1/lambda) e^{+i phi} = -(i rate / lambda) e^{+i phi}
    const cplx off = cplx(0.0, -rate / p.lambda) * std::polar(1.0, phi);
    cmat<2> h;
    h(0, 0) = -1.0 / p.lambda;
    h(1, 1) = 1.0 / p.lambda;
    h(0, 1) = off;
    h(1, 0) = std::conj(off);
    return h;
}

namespace detail {

/// Sign of sigma_z on qubit 1 / qubit 2 for basis index m in |i1 i2>,
/// qubit 1 on the most significant slot.
inline double s1_of(std::size_t m) { return (m & 2u) ? -1.0 : 1.0; }
inline double s2_of(std::size_t m) { return (m & 1u) ? -1.0 : 1.0; }

}  // namespace detail

/// Two-qubit sweep Hamiltonian before the degeneracy-breaking shift:
///   [-(d1+d2)/2 + tau/lambda] s1z - (d3/lambda)[cos phi4 s1x + sin phi4 s1y]
/// + [-d2/2     + tau/lambda] s2z - (1/lambda) [cos phi4 s2x + sin phi4 s2y]
/// - (pi/2) d4 s1z s2z.
/// Basis order |00>, |01>, |10>, |11> with qubit 1 the left slot. The c4
/// shift is applied in the propagator, on the eigenvalue of level 4.
inline cmat<4> h2_base(double tau, const TwoQubitParams& q) {
    const SweepParams& p = q.sweep;
    const double phi = twist_phi4(tau, p);
    const double a = -(q.d1 + q.d2) / 2.0 + tau / p.lambda;
    const double b = -q.d2 / 2.0 + tau / p.lambda;
    const double k = -(pi / 2.0) * q.d4;
    // Twist sense chosen so each qubit sees the same rotating-frame field
    // shape (tau - eta4 tau^3) as the one-qubit sweep; with the +tau/lambda
    // z slope that means the conjugate phase relative to h1.
    const cplx e = std::polar(1.0, -phi);
    const cplx q1 = (-q.d3 / p.lambda) * e;  // qubit-1 flip amplitude
    const cplx q2 = (-1.0 / p.lambda) * e;   // qubit-2 flip amplitude

    cmat<4> h;
    for (std::size_t m = 0; m < 4; ++m) {
        const double s1 = detail::s1_of(m), s2 = detail::s2_of(m);
        h(m, m) = a * s1 + b * s2 + k * s1 * s2;
    }
    h(0, 1) = q2;
    h(1, 0) = std::conj(q2);
    h(2, 3) = q2;
    h(3, 2) = std::conj(q2);
    h(0, 2) = q1;
    h(2, 0) = std::conj(q1);
    h(1, 3) = q1;
    h(3, 1) = std::conj(q1);
    return h;
}

/// Analytic d(h2_base)/dtau; the c4 shift is excluded on purpose (it moves
/// an eigenvalue, not the eigenvectors).
inline cmat<4> dh_dtau(double tau, const TwoQubitParams& q) {
    const SweepParams& p = q.sweep;
    const double phi = twist_phi4(tau, p);
    const double rate = twist_phi4_rate(tau, p);
    const cplx de = cplx(0.0, rate) * std::polar(1.0, -phi);
    const cplx dq1 = (q.d3 / p.lambda) * de;
    const cplx dq2 = (1.0 / p.lambda) * de;

    cmat<4> h;
    for (std::size_t m = 0; m < 4; ++m) {
        const double s1 = detail::s1_of(m), s2 = detail::s2_of(m);
        h(m, m) = (s1 + s2) / p.lambda;
    }
    h(0, 1) = dq2;
    h(1, 0) = std::conj(dq2);
    h(2, 3) = dq2;
    h(3, 2) = std::conj(dq2);
    h(0, 2) = dq1;
    h(2, 0) = std::conj(dq1);
    h(1, 3) = dq1;
    h(3, 1) = std::conj(dq1);
    return h;
}

struct ResonanceTime {
    double tau;
    bool in_window;  // |tau| <= tau0, the sweep window [-tau0, +tau0]
};

/// Roots of the quartic resonance condition tau = eta4 tau^3, i.e.
/// {-1/sqrt(eta4), 0, +1/sqrt(eta4)}, ascending. Roots outside the sweep
/// window are returned too, flagged, so diagnostics can report side
/// resonances that fall outside the sweep.
inline std::vector<ResonanceTime> resonance_times(const SweepParams& p) {
    p.validate();
    const double side = 1.0 / std::sqrt(p.eta4);
    return {{-side, side <= p.tau0}, {0.0, true}, {side, side <= p.tau0}};
}

}  // namespace trp
