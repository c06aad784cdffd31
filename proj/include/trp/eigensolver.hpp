#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>

#include "trp/errors.hpp"
#include "trp/linalg.hpp"

namespace trp {

/// Instantaneous eigenvalues and gauge-continued eigenvectors of the
/// Hamiltonian at one time slice. Column k of `vectors` is |E_k(tau)>.
/// Energies are ascending at the initial slice and thereafter follow the
/// levels by continuity.
template <std::size_t N>
struct EigenFrame {
    double tau = 0.0;
    std::array<double, N> energies{};
    cmat<N> vectors;
};

enum class InitialGauge {
    largest_component_real,   // largest-magnitude component made real positive
    first_nonzero_real        // first component above threshold made real positive
};

namespace detail {

/// Cyclic complex Jacobi on a Hermitian matrix. Returns eigenvalues on the
/// original slots (no sorting) and accumulates the eigenvectors into v.
/// Converged when the off-diagonal Frobenius norm falls below
/// tol_factor * ||H||_F.
template <std::size_t N>
void jacobi_hermitian(cmat<N>& a, cmat<N>& v, double tol_factor = 1e-14, int max_sweeps = 60) {
    v = cmat<N>::identity();
    const double norm_h = frobenius_norm(a);
    if (norm_h == 0.0) return;
    const double target = tol_factor * norm_h;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) s += std::norm(a(p, q));
        return std::sqrt(2.0 * s);
    };

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= target) return;
        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= 0.25 * target / N) continue;
                const cplx phase = apq / r;  // e^{i alpha}
                const double zeta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sp = s * phase;          // J(p,q) = s e^{i alpha}
                const cplx spc = std::conj(sp);     // s e^{-i alpha}

                // A <- J^dagger A J, acting on rows/columns p and q
                for (std::size_t k = 0; k < N; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - spc * akq;
                    a(k, q) = sp * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sp * aqk;
                    a(q, k) = spc * apk + c * aqk;
                }
                // clean up rounding on the pair we just rotated
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();

                for (std::size_t k = 0; k < N; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - spc * vkq;
                    v(k, q) = sp * vkp + c * vkq;
                }
            }
        }
    }
    if (off_norm() > target) throw EigenConvergenceError(off_norm());
}

}  // namespace detail

/// Full eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
/// The eigenvector gauge is whatever the rotations produce; fix it with
/// fix_initial_gauge or gauge_align before using frames in the propagator.
template <std::size_t N>
EigenFrame<N> eig_hermitian(const cmat<N>& h, double tau = 0.0) {
    cmat<N> a = h;
    cmat<N> v;
    detail::jacobi_hermitian(a, v);

    std::array<std::size_t, N> order;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenFrame<N> f;
    f.tau = tau;
    for (std::size_t k = 0; k < N; ++k) {
        f.energies[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < N; ++i) f.vectors(i, k) = v(i, order[k]);
    }
    return f;
}

/// Pin the phase of each eigenvector by the chosen convention. Used only at
/// the first time slice; later frames are gauged by continuity.
template <std::size_t N>
void fix_initial_gauge(EigenFrame<N>& f, InitialGauge g) {
    for (std::size_t k = 0; k < N; ++k) {
        std::size_t pick = 0;
        if (g == InitialGauge::largest_component_real) {
            double best = -1.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double m = std::abs(f.vectors(i, k));
                if (m > best) {
                    best = m;
                    pick = i;
                }
            }
        } else {
            while (pick + 1 < N && std::abs(f.vectors(pick, k)) < 1e-12) ++pick;
        }
        const cplx z = f.vectors(pick, k);
        const double m = std::abs(z);
        if (m == 0.0) continue;
        const cplx ph = std::conj(z) / m;
        for (std::size_t i = 0; i < N; ++i) f.vectors(i, k) *= ph;
    }
}

/// Match `next`'s columns to `prev`'s levels (permutation by max overlap,
/// then a unit phase per column so <prev_k|next_k> is real and positive).
/// Throws StepTooLargeError when the matching is ambiguous, which signals
/// the integrator to shrink its step.
template <std::size_t N>
EigenFrame<N> gauge_align(const EigenFrame<N>& prev, const EigenFrame<N>& next,
                          double ambiguity_tol = 1e-3) {
    cmat<N> overlap = dagger_mul(prev.vectors, next.vectors);  // <prev_k | next_j>

    std::array<std::size_t, N> match;
    std::array<bool, N> used{};
    for (std::size_t k = 0; k < N; ++k) {
        double best = -1.0, second = -1.0;
        std::size_t arg = 0;
        for (std::size_t j = 0; j < N; ++j) {
            const double m = std::abs(overlap(k, j));
            if (m > best) {
                second = best;
                best = m;
                arg = j;
            } else if (m > second) {
                second = m;
            }
        }
        if (best - second < ambiguity_tol)
            throw StepTooLargeError("ambiguous level matching between frames at tau " +
                                    std::to_string(prev.tau) + " and " + std::to_string(next.tau));
        if (used[arg])
            throw StepTooLargeError("level matching is not one-to-one between frames at tau " +
                                    std::to_string(prev.tau) + " and " + std::to_string(next.tau));
        used[arg] = true;
        match[k] = arg;
    }

    EigenFrame<N> out;
    out.tau = next.tau;
    for (std::size_t k = 0; k < N; ++k) {
        const std::size_t j = match[k];
        out.energies[k] = next.energies[j];
        const cplx z = overlap(k, j);
        const cplx ph = std::conj(z) / std::abs(z);
        for (std::size_t i = 0; i < N; ++i) out.vectors(i, k) = next.vectors(i, j) * ph;
    }
    return out;
}

}  // namespace trp
