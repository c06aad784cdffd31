#pragma once

#include <cmath>
#include <cstdint>

#include "trp/errors.hpp"
#include "trp/linalg.hpp"
#include "trp/rng.hpp"

namespace trp {

/// Tr[(U_a - U_t)^dagger (U_a - U_t)]: the optimization objective and an
/// upper bound on the worst-case gate error probability.
template <std::size_t N>
double tr_p(const cmat<N>& actual, const cmat<N>& target) {
    const cmat<N> d = actual - target;
    return trace(dagger_mul(d, d)).real();
}

/// Gate fidelity (1/2^n) Re Tr(U_a^dagger U_t), related to the trace bound
/// by F = 1 - Tr P / 2^{n+1} for unitary inputs.
template <std::size_t N>
double fidelity(const cmat<N>& actual, const cmat<N>& target) {
    return trace(dagger_mul(actual, target)).real() / static_cast<double>(N);
}

/// Error probability of the realized gate on one state: the squared norm of
/// the component of U_a|psi> orthogonal to U_t|psi>. `squared` selects the
/// squared variant of that quantity instead.
template <std::size_t N>
double pe_state(const cmat<N>& actual, const cmat<N>& target, const cvec<N>& psi,
                bool squared = false) {
    const double n = vnorm(psi);
    if (std::abs(n - 1.0) > 1e-12)
        throw InputError("pe_state requires a normalized state, got norm " + std::to_string(n));
    const cvec<N> pa = actual * psi;
    const cvec<N> pt = target * psi;
    const cplx ov = vdot(pt, pa);
    cvec<N> perp;
    for (std::size_t i = 0; i < N; ++i) perp[i] = pa[i] - ov * pt[i];
    double v = 0.0;
    for (std::size_t i = 0; i < N; ++i) v += std::norm(perp[i]);
    return squared ? v * v : v;
}

namespace detail {

template <std::size_t N>
cvec<N> random_state(Rng& rng) {
    cvec<N> v;
    for (auto& x : v) x = cplx(rng.gaussian(), rng.gaussian());
    return normalized(v);
}

}  // namespace detail

/// Sampling estimate of the worst-case error probability max_psi P_e(psi):
/// Haar-random starts refined by greedy hill climbing on the state sphere.
/// A lower bound on the true maximum; the trace bound stays above it.
template <std::size_t N>
double worst_case_pe(const cmat<N>& actual, const cmat<N>& target, int samples = 256,
                     int climb_steps = 50, std::uint64_t seed = 0x5eedULL) {
    if (samples < 1) throw InputError("worst_case_pe requires samples >= 1");
    Rng rng(seed);
    double best = 0.0;
    for (int s = 0; s < samples; ++s) {
        cvec<N> psi = detail::random_state<N>(rng);
        double val = pe_state(actual, target, psi);
        double scale = 0.3;
        for (int it = 0; it < climb_steps; ++it) {
            cvec<N> cand = psi;
            for (auto& x : cand) x += scale * cplx(rng.gaussian(), rng.gaussian());
            cand = normalized(cand);
            const double cv = pe_state(actual, target, cand);
            if (cv > val) {
                val = cv;
                psi = cand;
            } else {
                scale *= 0.7;
            }
        }
        best = std::max(best, val);
    }
    return best;
}

/// All gate scores in one bundle. fidelity_trp_quarter is the alternative
/// normalization 1 - Tr P / 4, reported alongside the standard fidelity for
/// two-qubit gates where the two conventions differ.
struct ScoreReport {
    double tr_p = 0.0;
    double fidelity = 0.0;
    double pe_bound = 0.0;
    double worst_case_pe_estimate = 0.0;
    double fidelity_trp_quarter = 0.0;
};

template <std::size_t N>
ScoreReport score(const cmat<N>& actual, const cmat<N>& target, int samples = 256) {
    ScoreReport r;
    r.tr_p = tr_p(actual, target);
    r.fidelity = fidelity(actual, target);
    r.pe_bound = r.tr_p;
    r.worst_case_pe_estimate = worst_case_pe(actual, target, samples);
    r.fidelity_trp_quarter = 1.0 - r.tr_p / 4.0;
    return r;
}

}  // namespace trp
