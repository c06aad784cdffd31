#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "trp/metrics.hpp"
#include "trp/targets.hpp"

using namespace trp;

TEST_CASE("trace error bound") {
    Rng rng(301);
    SUBCASE("identical gates score zero") {
        const auto u = oracle::random_unitary<4>(rng);
        CHECK(tr_p(u, u) < 1e-14);
    }

    SUBCASE("hadamard against not, by hand") {
        // Tr P = 2 + 2 - 2 Re Tr(U_NOT^dag U_H); the cross trace is
        // (1/sqrt2)(1 + 1) = sqrt(2), so Tr P = 4 - 2 sqrt(2).
        const auto h = target_1q(Gate::hadamard);
        const auto n = target_1q(Gate::not_gate);
        cplx cross = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) cross += std::conj(n(k, i)) * h(k, i);
        CHECK(cross.real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(tr_p(h, n) == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-14));
    }

    SUBCASE("published two-qubit gate matrix scores about 1.27e-3") {
        const double re[4][4] = {{0.9998, 0.0155, 0.0041, 0.0028},
                                 {-0.0154, 0.9997, -0.0003, 0.0021},
                                 {0.0042, -0.0002, -0.9999, -0.0038},
                                 {-0.0026, -0.0021, -0.0037, 0.9999}};
        const double im[4][4] = {{0.0052, -0.0108, -0.0031, -0.0017},
                                 {-0.0109, 0.0064, -0.0084, 0.0068},
                                 {0.0030, 0.0084, 0.0060, -0.0079},
                                 {-0.0018, 0.0068, 0.0079, 0.0026}};
        cmat<4> ua;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) ua(i, j) = cplx(re[i][j], im[i][j]);
        // entries are printed to 4 decimals; the value reconstructs to ~2%
        CHECK(tr_p(ua, target_2q(Gate::vcp)) == doctest::Approx(1.27e-3).epsilon(0.05));
    }

    SUBCASE("unitary invariance") {
        for (int i = 0; i < 50; ++i) {
            const auto a = oracle::random_unitary<4>(rng);
            const auto b = oracle::random_unitary<4>(rng);
            const auto w = oracle::random_unitary<4>(rng);
            CHECK(tr_p(w * a, w * b) == doctest::Approx(tr_p(a, b)).epsilon(1e-12));
        }
    }
}

TEST_CASE("fidelity") {
    Rng rng(37);
    SUBCASE("identical gates have unit fidelity") {
        const auto u = oracle::random_unitary<2>(rng);
        CHECK(fidelity(u, u) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(fidelity(u, cplx(-1.0) * u) == doctest::Approx(-1.0).epsilon(1e-14));
    }

    SUBCASE("published one-qubit bound maps to the published fidelity") {
        // Tr P = 8.82e-6 for one qubit means F = 1 - Tr P / 4 = 0.99999780
        CHECK(std::abs((1.0 - 8.82e-6 / 4.0) - 0.9999978) < 1e-8);
    }

    SUBCASE("identity between fidelity and the trace bound, both dims") {
        for (int i = 0; i < 200; ++i) {
            const auto a2 = oracle::random_unitary<2>(rng);
            const auto b2 = oracle::random_unitary<2>(rng);
            CHECK(fidelity(a2, b2) ==
                  doctest::Approx(1.0 - tr_p(a2, b2) / 4.0).epsilon(1e-12));
            const auto a4 = oracle::random_unitary<4>(rng);
            const auto b4 = oracle::random_unitary<4>(rng);
            CHECK(fidelity(a4, b4) ==
                  doctest::Approx(1.0 - tr_p(a4, b4) / 8.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("per-state error probability") {
    Rng rng(91);
    const auto u = oracle::random_unitary<2>(rng);

    SUBCASE("exact gate gives zero for every state") {
        for (int i = 0; i < 20; ++i) {
            const auto psi = oracle::random_state<2>(rng);
            CHECK(pe_state(u, u, psi) < 1e-14);
        }
    }

    SUBCASE("global phases are projected out") {
        const auto v = std::polar(1.0, 1.234) * u;
        for (int i = 0; i < 20; ++i) {
            const auto psi = oracle::random_state<2>(rng);
            CHECK(pe_state(v, u, psi) < 1e-14);
        }
    }

    SUBCASE("orthogonal action gives unity") {
        cvec<2> zero{cplx(1.0), cplx(0.0)};
        CHECK(pe_state(target_1q(Gate::not_gate), target_1q(Gate::identity), zero) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("squared variant squares the value") {
        const auto v = oracle::random_unitary<2>(rng);
        const auto psi = oracle::random_state<2>(rng);
        const double p = pe_state(u, v, psi);
        CHECK(pe_state(u, v, psi, true) == doctest::Approx(p * p).epsilon(1e-12));
    }

    SUBCASE("unnormalized input is rejected") {
        cvec<2> bad{cplx(1.0), cplx(1.0)};
        CHECK_THROWS_AS((void)pe_state(u, u, bad), InputError);
    }
}

TEST_CASE("worst-case error estimate") {
    Rng rng(113);
    SUBCASE("exact gate") {
        const auto u = oracle::random_unitary<2>(rng);
        CHECK(worst_case_pe(u, u, 8, 10) < 1e-14);
    }

    SUBCASE("stays below the trace bound on random pairs") {
        for (int i = 0; i < 1000; ++i) {
            const auto a = oracle::random_unitary<2>(rng);
            const auto b = oracle::random_unitary<2>(rng);
            CHECK(worst_case_pe(a, b, 4, 8) <= tr_p(a, b) + 1e-9);
        }
        for (int i = 0; i < 200; ++i) {
            const auto a = oracle::random_unitary<4>(rng);
            const auto b = oracle::random_unitary<4>(rng);
            CHECK(worst_case_pe(a, b, 4, 8) <= tr_p(a, b) + 1e-9);
        }
    }

    SUBCASE("orthogonal action approaches unity") {
        const double w =
            worst_case_pe(target_1q(Gate::not_gate), target_1q(Gate::identity), 64, 50);
        CHECK(w > 0.999);
        CHECK(w <= 1.0 + 1e-12);
    }

    SUBCASE("deterministic for a fixed seed") {
        const auto a = oracle::random_unitary<4>(rng);
        const auto b = oracle::random_unitary<4>(rng);
        CHECK(worst_case_pe(a, b, 16, 20, 42) == worst_case_pe(a, b, 16, 20, 42));
    }
}

TEST_CASE("score bundle") {
    Rng rng(7);
    const auto a = oracle::random_unitary<4>(rng);
    const auto b = oracle::random_unitary<4>(rng);
    const auto s = score(a, b, 16);
    CHECK(s.pe_bound == s.tr_p);
    CHECK(s.worst_case_pe_estimate <= s.tr_p + 1e-9);
    CHECK(s.fidelity == doctest::Approx(1.0 - s.tr_p / 8.0).epsilon(1e-12));
    CHECK(s.fidelity_trp_quarter == doctest::Approx(1.0 - s.tr_p / 4.0).epsilon(1e-12));
}
