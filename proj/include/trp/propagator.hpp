#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "trp/eigensolver.hpp"
#include "trp/errors.hpp"
#include "trp/hamiltonians.hpp"
#include "trp/linalg.hpp"
#include "trp/sweep.hpp"

namespace trp {

struct IntegratorOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    long max_steps = 4000000;
    double initial_step = 0.0;  // <= 0 means tau0 / 1e4
    double min_step = 1e-12;
    double norm_tol = 1e-6;        // |sum |a_k|^2 - 1| above this is an accuracy error
    double degeneracy_tol = 1e-9;  // minimum level gap for the coupling matrix
    double align_tol = 1e-3;       // frame-matching ambiguity threshold
    InitialGauge initial_gauge = InitialGauge::largest_component_real;
};

/// One-qubit sweep as a propagation model.
struct OneQubitModel {
    static constexpr std::size_t dim = 2;
    SweepParams params;

    double tau0() const { return params.tau0; }
    cmat<2> hamiltonian(double tau) const { return h1(tau, params); }
    cmat<2> derivative(double tau) const { return dh_dtau(tau, params); }
    double level_shift(std::size_t, const std::array<double, 2>&) const { return 0.0; }
};

/// Two-qubit sweep. The c4 degeneracy-breaking term is an eigenvalue shift
/// on the instantaneous top level (which the adiabatic continuation keeps
/// at the same slot: avoided crossings never reorder the levels);
/// eigenvectors and couplings are those of the unshifted Hamiltonian.
struct TwoQubitModel {
    static constexpr std::size_t dim = 4;
    TwoQubitParams params;

    double tau0() const { return params.sweep.tau0; }
    cmat<4> hamiltonian(double tau) const { return h2_base(tau, params); }
    cmat<4> derivative(double tau) const { return dh_dtau(tau, params); }
    /// The degeneracy-breaking shift rides on the instantaneous top level.
    double level_shift(std::size_t slot, const std::array<double, 4>& energies) const {
        for (std::size_t j = 0; j < 4; ++j)
            if (energies[j] > energies[slot]) return 0.0;
        return params.c4;
    }
};

/// Expansion coefficients and accumulated phase integrals along the sweep.
/// geometric_integrals hold the integral of the diagonal connection; in the
/// continuity-pinned gauge used here that connection vanishes identically,
/// so these stay zero and the geometric phase is carried by the frame
/// vectors themselves.
template <std::size_t N>
struct PropagationState {
    double tau = 0.0;
    cvec<N> amplitudes{};
    std::array<double, N> phase_integrals{};
    std::array<double, N> geometric_integrals{};
};

struct PropagationDiagnostics {
    long steps_accepted = 0;
    long steps_rejected = 0;
    double max_norm_drift = 0.0;
};

template <std::size_t N>
struct ColumnResult {
    cvec<N> state{};  // final state in the computational basis
    PropagationState<N> final_state;
    EigenFrame<N> final_frame;
    PropagationDiagnostics diagnostics;
};

/// Non-adiabatic coupling matrix on a gauged frame:
///   Gamma_kl = <E_k | dH/dtau | E_l> / (E_l - E_k)   (k != l).
/// The diagonal vanishes in the parallel-transport gauge and is returned as
/// zero; the test suite cross-checks the off-diagonals against finite
/// differences of the gauge-aligned eigenvectors.
template <std::size_t N>
cmat<N> coupling_matrix(const EigenFrame<N>& frame, const cmat<N>& dh,
                        double degeneracy_tol = 1e-9) {
    const cmat<N> w = dagger_mul(frame.vectors, dh * frame.vectors);
    cmat<N> gamma;
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t l = 0; l < N; ++l) {
            if (k == l) continue;
            const double gap = frame.energies[l] - frame.energies[k];
            if (std::abs(gap) < degeneracy_tol)
                throw NearDegeneracyError(std::min(k, l), std::max(k, l), std::abs(gap));
            gamma(k, l) = w(k, l) / gap;
        }
    return gamma;
}

namespace detail {

/// Integrated quantities: M columns of expansion amplitudes, dynamical phase
/// integrals, instantaneous energies, and the parallel-transported frame
/// itself. The frame obeys dV/dtau = V Gamma with the Hellmann-Feynman
/// coupling, so the gauge is carried at the full order of the integrator
/// instead of being re-pinned from scratch at every evaluation. Columns
/// share the grid, frame, and phases exactly, which keeps the assembled
/// unitary consistent across columns.
template <std::size_t N, std::size_t M = 1>
struct OdeState {
    std::array<cvec<N>, M> a{};
    std::array<double, N> theta{};
    std::array<double, N> energy{};
    cmat<N> frame;
};

/// Dormand-Prince 5(4) tableau.
struct Dp54 {
    static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double a2[1] = {1.0 / 5};
    static constexpr double a3[2] = {3.0 / 40, 9.0 / 40};
    static constexpr double a4[3] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
    static constexpr double a5[4] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                     -212.0 / 729};
    static constexpr double a6[5] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                                     -5103.0 / 18656};
    static constexpr double a7[6] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                                     11.0 / 84};
    // fifth-order minus embedded fourth-order weights
    static constexpr double e[7] = {71.0 / 57600, 0.0,          -71.0 / 16695, 71.0 / 1920,
                                    -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
};

/// Right-hand side of the eigenbasis equations of motion. The frame is part
/// of the integrated state, so every stage sees a smooth parallel-transport
/// gauge and the adaptive error control covers the frame rotation through
/// avoided crossings.
template <class Model, std::size_t M = 1>
class EigenbasisRhs {
  public:
    static constexpr std::size_t N = Model::dim;

    EigenbasisRhs(const Model& model, const IntegratorOptions& opt) : model_(model), opt_(opt) {}

    /// da_k/dtau = -sum_{l != k} a_l Gamma_kl exp(-i (theta_l - theta_k)),
    /// dtheta_k/dtau = E_k (+ c4 on the tracked top level),
    /// dE_k/dtau = <E_k| dH |E_k>, dV/dtau = V Gamma.
    OdeState<N, M> operator()(double tau, const OdeState<N, M>& y) const {
        const cmat<N> w = dagger_mul(y.frame, model_.derivative(tau) * y.frame);

        cmat<N> gamma;  // Gamma_kl = W_kl / (E_l - E_k), zero diagonal
        for (std::size_t k = 0; k < N; ++k)
            for (std::size_t l = 0; l < N; ++l) {
                if (k == l) continue;
                const double gap = y.energy[l] - y.energy[k];
                if (std::abs(gap) < opt_.degeneracy_tol)
                    throw NearDegeneracyError(std::min(k, l), std::max(k, l), std::abs(gap));
                gamma(k, l) = w(k, l) / gap;
            }

        OdeState<N, M> dy;
        cvec<N> phase;
        for (std::size_t k = 0; k < N; ++k) phase[k] = std::polar(1.0, -y.theta[k]);
        for (std::size_t col = 0; col < M; ++col) {
            cvec<N> u;
            for (std::size_t k = 0; k < N; ++k) u[k] = y.a[col][k] * phase[k];
            for (std::size_t k = 0; k < N; ++k) {
                cplx s = 0.0;
                for (std::size_t l = 0; l < N; ++l) s += gamma(k, l) * u[l];
                dy.a[col][k] = -std::conj(phase[k]) * s;
            }
        }
        for (std::size_t k = 0; k < N; ++k) {
            dy.theta[k] = y.energy[k] + model_.level_shift(k, y.energy);
            dy.energy[k] = w(k, k).real();
        }
        dy.frame = y.frame * gamma;
        return dy;
    }

  private:
    const Model& model_;
    const IntegratorOptions& opt_;
};

template <std::size_t N, std::size_t M>
OdeState<N, M> combine(const OdeState<N, M>& y, double h, const OdeState<N, M>* k,
                       const double* w, std::size_t n) {
    OdeState<N, M> out = y;
    for (std::size_t s = 0; s < n; ++s) {
        if (w[s] == 0.0) continue;
        const double hw = h * w[s];
        for (std::size_t col = 0; col < M; ++col)
            for (std::size_t i = 0; i < N; ++i) out.a[col][i] += hw * k[s].a[col][i];
        for (std::size_t i = 0; i < N; ++i) {
            out.theta[i] += hw * k[s].theta[i];
            out.energy[i] += hw * k[s].energy[i];
        }
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) out.frame(i, j) += hw * k[s].frame(i, j);
    }
    return out;
}

/// Re-anchor the integrated frame on the exact eigenvectors of H(tau),
/// keeping its gauge: the correction rotation is phase-pinned to the
/// integrated frame, and the amplitudes are re-expressed in the corrected
/// frame. Removes secular drift without disturbing parallel transport.
template <class Model, std::size_t M>
void reanchor(const Model& model, double tau, OdeState<Model::dim, M>& y, double align_tol) {
    constexpr std::size_t N = Model::dim;
    cmat<N> g = dagger_mul(y.frame, model.hamiltonian(tau) * y.frame);
    for (std::size_t i = 0; i < N; ++i) {
        g(i, i) = g(i, i).real();
        for (std::size_t j = i + 1; j < N; ++j) {
            const cplx m = 0.5 * (g(i, j) + std::conj(g(j, i)));
            g(i, j) = m;
            g(j, i) = std::conj(m);
        }
    }
    cmat<N> q;
    jacobi_hermitian(g, q);

    for (std::size_t k = 0; k < N; ++k) {
        double best = -1.0, second = -1.0;
        std::size_t arg = 0;
        for (std::size_t j = 0; j < N; ++j) {
            const double m = std::abs(q(j, k));
            if (m > best) {
                second = best;
                best = m;
                arg = j;
            } else if (m > second) {
                second = m;
            }
        }
        if (arg != k || best - second < align_tol)
            throw StepTooLargeError("frame drifted at tau " + std::to_string(tau));
        const cplx z = q(k, k);
        const cplx ph = std::conj(z) / std::abs(z);
        for (std::size_t i = 0; i < N; ++i) q(i, k) *= ph;
    }

    y.frame = y.frame * q;
    for (std::size_t col = 0; col < M; ++col) {
        cvec<N> a_new{};
        for (std::size_t k = 0; k < N; ++k)
            for (std::size_t l = 0; l < N; ++l) a_new[k] += std::conj(q(l, k)) * y.a[col][l];
        y.a[col] = a_new;
    }
    for (std::size_t k = 0; k < N; ++k) y.energy[k] = g(k, k).real();
}

}  // namespace detail

/// Builds the initial eigenframe at tau = -tau0 with ascending energies
/// and the requested phase convention.
template <class Model>
EigenFrame<Model::dim> initial_frame(const Model& model, const IntegratorOptions& opt) {
    const double start = -model.tau0();
    auto f = eig_hermitian<Model::dim>(model.hamiltonian(start), start);
    fix_initial_gauge(f, opt.initial_gauge);
    return f;
}

namespace detail {

template <std::size_t N, std::size_t M>
struct CoreResult {
    OdeState<N, M> state;
    PropagationDiagnostics diagnostics;
};

/// Adaptive Dormand-Prince 5(4) integration of the eigenbasis equations
/// over the sweep window [-tau0, +tau0], M amplitude columns at once.
template <class Model, std::size_t M>
CoreResult<Model::dim, M> propagate_core(const Model& model,
                                         const std::array<cvec<Model::dim>, M>& a0,
                                         const EigenFrame<Model::dim>& start,
                                         const IntegratorOptions& opt) {
    constexpr std::size_t N = Model::dim;
    const double end = model.tau0();
    double tau = -end;

    EigenbasisRhs<Model, M> rhs(model, opt);

    OdeState<N, M> y;
    y.frame = start.vectors;
    y.energy = start.energies;
    y.a = a0;

    double h = opt.initial_step > 0.0 ? opt.initial_step : model.tau0() * 1e-4;

    PropagationDiagnostics diag;
    OdeState<N, M> k[7];

    using tab = Dp54;
    bool just_rejected = false;
    bool have_k1 = false;
    const double tau_eps = 1e-14 * model.tau0();

    while (end - tau > tau_eps) {
        if (diag.steps_accepted + diag.steps_rejected >= opt.max_steps)
            throw IntegrationError("step budget exhausted", tau);
        if (h < opt.min_step) throw IntegrationError("step size underflow", tau);
        if (tau + h >= end) h = end - tau;

        OdeState<N, M> y7;
        bool too_large = false;
        try {
            if (!have_k1) {
                k[0] = rhs(tau, y);
                have_k1 = true;
            }
            auto y2 = combine(y, h, k, tab::a2, 1);
            k[1] = rhs(tau + tab::c[1] * h, y2);
            auto y3 = combine(y, h, k, tab::a3, 2);
            k[2] = rhs(tau + tab::c[2] * h, y3);
            auto y4 = combine(y, h, k, tab::a4, 3);
            k[3] = rhs(tau + tab::c[3] * h, y4);
            auto y5 = combine(y, h, k, tab::a5, 4);
            k[4] = rhs(tau + tab::c[4] * h, y5);
            auto y6 = combine(y, h, k, tab::a6, 5);
            k[5] = rhs(tau + tab::c[5] * h, y6);
            y7 = combine(y, h, k, tab::a7, 6);  // fifth-order candidate
            k[6] = rhs(tau + h, y7);
        } catch (const StepTooLargeError&) {
            too_large = true;
        }

        if (too_large) {
            ++diag.steps_rejected;
            just_rejected = true;
            h *= 0.5;
            continue;
        }

        // weighted rms of the embedded error estimate
        double err2 = 0.0;
        for (std::size_t col = 0; col < M; ++col)
            for (std::size_t i = 0; i < N; ++i) {
                cplx ea = 0.0;
                for (int s = 0; s < 7; ++s) ea += tab::e[s] * k[s].a[col][i];
                const double sa = opt.abs_tol + opt.rel_tol * std::max(std::abs(y.a[col][i]),
                                                                       std::abs(y7.a[col][i]));
                err2 += std::norm(h * ea / sa);
            }
        for (std::size_t i = 0; i < N; ++i) {
            double et = 0.0, ee = 0.0;
            for (int s = 0; s < 7; ++s) {
                et += tab::e[s] * k[s].theta[i];
                ee += tab::e[s] * k[s].energy[i];
            }
            const double st =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y.theta[i]), std::abs(y7.theta[i]));
            const double se = opt.abs_tol + opt.rel_tol * std::max(std::abs(y.energy[i]),
                                                                   std::abs(y7.energy[i]));
            err2 += (h * et / st) * (h * et / st) + (h * ee / se) * (h * ee / se);
        }
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) {
                cplx ev = 0.0;
                for (int s = 0; s < 7; ++s) ev += tab::e[s] * k[s].frame(i, j);
                const double sv = opt.abs_tol + opt.rel_tol * std::max(std::abs(y.frame(i, j)),
                                                                       std::abs(y7.frame(i, j)));
                err2 += std::norm(h * ev / sv);
            }
        const double err = std::sqrt(err2 / ((M + 2.0) * N + N * N));

        bool anchored = true;
        if (err <= 1.0) {
            try {
                reanchor(model, tau + h, y7, opt.align_tol);
            } catch (const StepTooLargeError&) {
                anchored = false;
            }
        }

        if (err <= 1.0 && anchored) {
            tau += h;
            y = y7;
            have_k1 = false;  // state was re-anchored, first stage must be fresh
            ++diag.steps_accepted;

            for (std::size_t col = 0; col < M; ++col) {
                double norm2 = 0.0;
                for (std::size_t i = 0; i < N; ++i) norm2 += std::norm(y.a[col][i]);
                diag.max_norm_drift = std::max(diag.max_norm_drift, std::abs(norm2 - 1.0));
            }
            if (diag.max_norm_drift > opt.norm_tol) throw AccuracyError(diag.max_norm_drift);

            double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            grow = std::clamp(grow, 0.2, just_rejected ? 1.0 : 5.0);
            h *= grow;
            just_rejected = false;
        } else {
            ++diag.steps_rejected;
            just_rejected = true;
            h *= anchored ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9) : 0.5;
        }
    }

    CoreResult<N, M> out;
    out.state = y;
    out.diagnostics = diag;
    return out;
}

}  // namespace detail

/// Integrates an arbitrary normalized initial state across the sweep and
/// returns the final state in the computational basis, phases included.
template <class Model>
ColumnResult<Model::dim> propagate_state(const Model& model, const cvec<Model::dim>& psi0,
                                         const IntegratorOptions& opt = {}) {
    constexpr std::size_t N = Model::dim;
    if (std::abs(vnorm(psi0) - 1.0) > 1e-10)
        throw InputError("initial state must be normalized");

    const EigenFrame<N> ref = initial_frame(model, opt);
    std::array<cvec<N>, 1> a0{};
    for (std::size_t k = 0; k < N; ++k) {
        cplx proj = 0.0;
        for (std::size_t i = 0; i < N; ++i) proj += std::conj(ref.vectors(i, k)) * psi0[i];
        a0[0][k] = proj;
    }

    const auto core = detail::propagate_core<Model, 1>(model, a0, ref, opt);

    ColumnResult<N> res;
    res.final_frame.tau = model.tau0();
    res.final_frame.vectors = core.state.frame;
    res.final_frame.energies = core.state.energy;
    res.diagnostics = core.diagnostics;
    res.final_state.tau = model.tau0();
    res.final_state.amplitudes = core.state.a[0];
    res.final_state.phase_integrals = core.state.theta;

    cvec<N> psi{};
    for (std::size_t k2 = 0; k2 < N; ++k2) {
        const cplx w = core.state.a[0][k2] * std::polar(1.0, -core.state.theta[k2]);
        for (std::size_t m = 0; m < N; ++m) psi[m] += w * core.state.frame(m, k2);
    }
    res.state = normalized(psi);  // project out residual integrator norm drift
    return res;
}

/// Integrates one computational basis column.
template <class Model>
ColumnResult<Model::dim> propagate_column(const Model& model, std::size_t basis_index,
                                          const IntegratorOptions& opt = {}) {
    constexpr std::size_t N = Model::dim;
    if (basis_index >= N)
        throw InputError("basis index " + std::to_string(basis_index) + " out of range for dim " +
                         std::to_string(N));
    cvec<N> psi0{};
    psi0[basis_index] = 1.0;
    return propagate_state(model, psi0, opt);
}

/// Convenience overloads on the raw parameter types.
inline ColumnResult<2> propagate_column(const SweepParams& p, std::size_t basis_index,
                                        const IntegratorOptions& opt = {}) {
    p.validate();
    return propagate_column(OneQubitModel{p}, basis_index, opt);
}
inline ColumnResult<4> propagate_column(const TwoQubitParams& p, std::size_t basis_index,
                                        const IntegratorOptions& opt = {}) {
    p.validate();
    return propagate_column(TwoQubitModel{p}, basis_index, opt);
}

/// Realized unitary with its scores and integration diagnostics.
template <std::size_t N>
struct GateResult {
    cmat<N> unitary;
    double tr_p = 0.0;
    double fidelity = 0.0;
    long steps_accepted = 0;
    long steps_rejected = 0;
    double max_norm_drift = 0.0;
    double unitarity_residual = 0.0;
};

template <std::size_t N>
double unitarity_residual(const cmat<N>& u) {
    return frobenius_norm(dagger_mul(u, u) - cmat<N>::identity());
}

/// Boundary eigenframe used to reference the realized gate: ascending
/// energies, each eigenvector's first component made real and positive (the
/// standard Bloch-form convention), plus the level -> computational index
/// map by dominant component. The realized gate is defined between these
/// asymptotic frames, where the sweep field is (nearly) aligned with the
/// computational axis.
template <std::size_t N>
struct BoundaryFrame {
    EigenFrame<N> frame;
    std::array<std::size_t, N> comp_index;  // level k corresponds to this basis state
};

template <class Model>
BoundaryFrame<Model::dim> boundary_frame(const Model& model, double tau) {
    constexpr std::size_t N = Model::dim;
    BoundaryFrame<N> b;
    b.frame = eig_hermitian<N>(model.hamiltonian(tau), tau);
    fix_initial_gauge(b.frame, InitialGauge::first_nonzero_real);
    std::array<bool, N> used{};
    for (std::size_t k = 0; k < N; ++k) {
        double best = -1.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double m = std::abs(b.frame.vectors(i, k));
            if (m > best) {
                best = m;
                arg = i;
            }
        }
        if (used[arg])
            throw NumericalError("boundary levels at tau " + std::to_string(tau) +
                                 " have no one-to-one computational correspondence");
        used[arg] = true;
        b.comp_index[k] = arg;
    }
    return b;
}

/// Simulates the sweep started in every initial boundary eigenstate and
/// assembles the realized gate between the boundary frames, levels labeled
/// by their computational correspondence. Errors from a column are
/// annotated with the failing column.
template <class Model>
GateResult<Model::dim> assemble_unitary(const Model& model, const cmat<Model::dim>& target,
                                        const IntegratorOptions& opt = {}) {
    constexpr std::size_t N = Model::dim;
    const auto start = boundary_frame(model, -model.tau0());
    const auto end = boundary_frame(model, model.tau0());

    // all columns ride one integration so they share the grid and gauge
    const EigenFrame<N> ref = initial_frame(model, opt);
    std::array<cvec<N>, N> a0{};
    for (std::size_t level = 0; level < N; ++level)
        for (std::size_t k = 0; k < N; ++k) {
            cplx proj = 0.0;
            for (std::size_t i = 0; i < N; ++i)
                proj += std::conj(ref.vectors(i, k)) * start.frame.vectors(i, level);
            a0[level][k] = proj;
        }

    detail::CoreResult<N, N> core;
    try {
        core = detail::propagate_core<Model, N>(model, a0, ref, opt);
    } catch (const NumericalError& e) {
        throw IntegrationError(std::string("gate assembly: ") + e.what(), -model.tau0());
    }

    // project the final states onto the end boundary frame
    const cmat<N> overlap = dagger_mul(end.frame.vectors, core.state.frame);
    GateResult<N> result;
    for (std::size_t level = 0; level < N; ++level) {
        cvec<N> col{};
        for (std::size_t k = 0; k < N; ++k) {
            cplx amp = 0.0;
            for (std::size_t j = 0; j < N; ++j)
                amp += overlap(k, j) * core.state.a[level][j] *
                       std::polar(1.0, -core.state.theta[j]);
            col[k] = amp;
        }
        col = normalized(col);  // project out residual integrator norm drift
        for (std::size_t k = 0; k < N; ++k)
            result.unitary(end.comp_index[k], start.comp_index[level]) = col[k];
    }
    result.steps_accepted = core.diagnostics.steps_accepted;
    result.steps_rejected = core.diagnostics.steps_rejected;
    result.max_norm_drift = core.diagnostics.max_norm_drift;

    const cmat<N> d = result.unitary - target;
    result.tr_p = trace(dagger_mul(d, d)).real();
    cplx tr = trace(dagger_mul(result.unitary, target));
    result.fidelity = tr.real() / static_cast<double>(N);
    result.unitarity_residual = unitarity_residual(result.unitary);
    return result;
}

inline GateResult<2> assemble_unitary(const SweepParams& p, const cmat<2>& target,
                                      const IntegratorOptions& opt = {}) {
    p.validate();
    return assemble_unitary(OneQubitModel{p}, target, opt);
}
inline GateResult<4> assemble_unitary(const TwoQubitParams& p, const cmat<4>& target,
                                      const IntegratorOptions& opt = {}) {
    p.validate();
    return assemble_unitary(TwoQubitModel{p}, target, opt);
}

}  // namespace trp
