#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "trp/hamiltonians.hpp"
#include "trp/rng.hpp"

using namespace trp;

namespace {

/// Newton root refinement of tau - eta4 tau^3 = 0 from a starting guess;
/// independent of the closed-form roots the library uses.
double resonance_root_newton(double eta4, double guess) {
    double x = guess;
    for (int i = 0; i < 100; ++i) {
        const double f = x - eta4 * x * x * x;
        const double df = 1.0 - 3.0 * eta4 * x * x;
        const double step = f / df;
        x -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

template <std::size_t N>
bool exactly_hermitian(const cmat<N>& h) {
    for (std::size_t i = 0; i < N; ++i) {
        if (h(i, i).imag() != 0.0) return false;
        for (std::size_t j = i + 1; j < N; ++j)
            if (h(i, j) != std::conj(h(j, i))) return false;
    }
    return true;
}

TwoQubitParams vcp_operating_point() {
    TwoQubitParams q;
    q.sweep = {5.1, 2.4e-4, 120.0};
    q.d1 = 11.702;
    q.d2 = -2.6;
    q.d3 = -0.41;
    q.d4 = 6.6650;
    q.c4 = 5.0003;
    return q;
}

}  // namespace

TEST_CASE("twist profile") {
    SweepParams any{2.0, 4.0, 80.0};
    CHECK(twist_phi4(0.0, any) == 0.0);
    CHECK(twist_phi4(1.0, any) == doctest::Approx(1.0).epsilon(1e-15));

    // long-double reference evaluation of (eta4 / 2 lambda) tau^4
    SweepParams hadamard{5.8511, 2.9280e-4, 80.0};
    const long double ref = (2.9280e-4L / (2.0L * 5.8511L)) * 40.0L * 40.0L * 40.0L * 40.0L;
    CHECK(twist_phi4(40.0, hadamard) ==
          doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
    CHECK(twist_phi4(40.0, hadamard) == doctest::Approx(64.053596759583668).epsilon(1e-13));
}

TEST_CASE("h1 structure") {
    SUBCASE("tau = 0 is minus sigma_x over lambda") {
        SweepParams p{1.0, 0.37, 80.0};
        const auto h = h1(0.0, p);
        CHECK(h(0, 0) == cplx(0.0));
        CHECK(h(1, 1) == cplx(0.0));
        CHECK(h(0, 1) == cplx(-1.0));
        CHECK(h(1, 0) == cplx(-1.0));
    }

    SUBCASE("traceless, hermitian, eigenvalues +- sqrt(tau^2+1)/lambda") {
        Rng rng(11);
        for (int i = 0; i < 10000; ++i) {
            SweepParams p{0.5 + 8.0 * rng.uniform(), 1e-4 + 1e-3 * rng.uniform(), 80.0};
            const double tau = 90.0 * (rng.uniform() - 0.5);
            const auto h = h1(tau, p);
            CHECK(exactly_hermitian(h));
            CHECK(trace(h).real() == 0.0);
            if (i % 50 == 0) {
                const auto w = oracle::eigenvalues_bruteforce(h);
                const double expect = std::sqrt(tau * tau + 1.0) / p.lambda;
                CHECK(w[0] == doctest::Approx(-expect).epsilon(1e-12));
                CHECK(w[1] == doctest::Approx(expect).epsilon(1e-12));
            }
        }
    }

    SUBCASE("gap at tau = -40 for the hadamard point") {
        SweepParams p{5.8511, 2.9280e-4, 80.0};
        const auto w = oracle::eigenvalues_bruteforce(h1(-40.0, p));
        CHECK(w[1] - w[0] == doctest::Approx(2.0 * std::sqrt(1601.0) / 5.8511).epsilon(1e-12));
        CHECK(w[1] - w[0] == doctest::Approx(13.676914784394426).epsilon(1e-12));
    }
}

TEST_CASE("h2_base structure") {
    SUBCASE("tau = 0 with unit couplings reduces to -(s1x + s2x)") {
        TwoQubitParams q;
        q.sweep = {1.0, 3.3e-4, 120.0};
        q.d1 = q.d2 = q.d4 = 0.0;
        q.d3 = 1.0;
        const auto h = h2_base(0.0, q);
        const auto expect = cplx(-1.0) * (kron(pauli::x(), pauli::id()) +
                                          kron(pauli::id(), pauli::x()));
        CHECK(frobenius_norm(h - expect) < 1e-15);
    }

    SUBCASE("d3 = 0 kills the qubit-1 transverse terms identically") {
        auto q = vcp_operating_point();
        q.d3 = 0.0;
        Rng rng(7);
        for (int i = 0; i < 50; ++i) {
            const double tau = 120.0 * (rng.uniform() - 0.5);
            const auto h = h2_base(tau, q);
            CHECK(h(0, 2) == cplx(0.0));
            CHECK(h(1, 3) == cplx(0.0));
            CHECK(h(2, 0) == cplx(0.0));
            CHECK(h(3, 1) == cplx(0.0));
        }
    }

    SUBCASE("diagonal at tau = 0 matches the hand-evaluated entries") {
        const auto q = vcp_operating_point();
        const auto h = h2_base(0.0, q);
        // a0 = -(d1+d2)/2, b0 = -d2/2, k = -(pi/2) d4; diag = a0 s1 + b0 s2 + k s1 s2
        const double a0 = -(q.d1 + q.d2) / 2.0;
        const double b0 = -q.d2 / 2.0;
        const double k = -(pi / 2.0) * q.d4;
        const double expect[4] = {a0 + b0 + k, a0 - b0 - k, -a0 + b0 - k, -a0 - b0 + k};
        for (int m = 0; m < 4; ++m)
            CHECK(h(m, m).real() == doctest::Approx(expect[m]).epsilon(1e-15));
        CHECK(h(0, 0).real() == doctest::Approx(-13.720357518087986).epsilon(1e-14));
    }

    SUBCASE("hermitian and traceless at random points") {
        Rng rng(23);
        for (int i = 0; i < 10000; ++i) {
            TwoQubitParams q;
            q.sweep = {0.5 + 8.0 * rng.uniform(), 1e-4 + 1e-3 * rng.uniform(), 120.0};
            q.d1 = 20.0 * (rng.uniform() - 0.5);
            q.d2 = 10.0 * (rng.uniform() - 0.5);
            q.d3 = 2.0 * (rng.uniform() - 0.5);
            q.d4 = 10.0 * (rng.uniform() - 0.5);
            const double tau = 120.0 * (rng.uniform() - 0.5);
            const auto h = h2_base(tau, q);
            CHECK(exactly_hermitian(h));
            CHECK(std::abs(trace(h).real()) < 1e-13);
        }
    }
}

TEST_CASE("analytic derivative") {
    SUBCASE("one-qubit at tau = 0 is -(1/lambda) sigma_z") {
        SweepParams p{2.5, 3e-4, 80.0};
        const auto d = dh_dtau(0.0, p);
        CHECK(d(0, 0) == cplx(-0.4));
        CHECK(d(1, 1) == cplx(0.4));
        CHECK(d(0, 1) == cplx(0.0));
    }

    SUBCASE("transverse derivative magnitude by chain rule") {
        // |d/dtau of the transverse part| = (1/lambda)(2 eta4/lambda) tau^3,
        // cross-checked against central differences below.
        SweepParams p{2.0, 4.0, 80.0};
        const auto d = dh_dtau(1.0, p);
        const double mag = std::abs(d(0, 1));
        CHECK(mag == doctest::Approx((1.0 / 2.0) * (2.0 * 4.0 / 2.0)).epsilon(1e-13));
        const auto fd = cplx(1.0 / 2e-7) * (h1(1.0 + 1e-7, p) - h1(1.0 - 1e-7, p));
        CHECK(std::abs(fd(0, 1)) == doctest::Approx(mag).epsilon(1e-6));
    }

    SUBCASE("central differences converge at second order") {
        SweepParams p{5.8511, 2.9280e-4, 80.0};
        const double tau = 17.3;
        auto fd_err = [&](double h) {
            const auto fd = cplx(1.0 / (2.0 * h)) * (h1(tau + h, p) - h1(tau - h, p));
            return frobenius_norm(fd - dh_dtau(tau, p));
        };
        const double e3 = fd_err(1e-3), e4 = fd_err(1e-4);
        CHECK(e3 < 1e-4);
        CHECK(e4 < 1e-6);
        CHECK(e4 < e3);
    }

    SUBCASE("matches central differences to 1e-6 relative at random points") {
        Rng rng(31);
        const double h = 1e-5;
        for (int i = 0; i < 100; ++i) {
            SweepParams p{1.0 + 7.0 * rng.uniform(), 1e-4 + 8e-4 * rng.uniform(), 80.0};
            const double tau = 80.0 * (rng.uniform() - 0.5);
            const auto fd1 = cplx(1.0 / (2.0 * h)) * (h1(tau + h, p) - h1(tau - h, p));
            const auto an1 = dh_dtau(tau, p);
            CHECK(frobenius_norm(fd1 - an1) / frobenius_norm(an1) < 1e-6);

            TwoQubitParams q = vcp_operating_point();
            q.sweep.lambda = p.lambda;
            q.sweep.eta4 = p.eta4;
            const auto fd2 = cplx(1.0 / (2.0 * h)) * (h2_base(tau + h, q) - h2_base(tau - h, q));
            const auto an2 = dh_dtau(tau, q);
            CHECK(frobenius_norm(fd2 - an2) / frobenius_norm(an2) < 1e-6);
        }
    }
}

TEST_CASE("resonance times") {
    SUBCASE("eta4 = 1 gives -1, 0, 1") {
        const auto r = resonance_times({1.0, 1.0, 80.0});
        REQUIRE(r.size() == 3);
        CHECK(r[0].tau == doctest::Approx(-1.0));
        CHECK(r[1].tau == 0.0);
        CHECK(r[2].tau == doctest::Approx(1.0));
        for (const auto& root : r) CHECK(root.in_window);
    }

    SUBCASE("eta4 = 4e-4 side roots at +-50, verified by a newton solver") {
        const auto r = resonance_times({5.0, 4e-4, 200.0});
        CHECK(r[2].tau == doctest::Approx(resonance_root_newton(4e-4, 48.0)).epsilon(1e-13));
        CHECK(r[2].tau == doctest::Approx(50.0).epsilon(1e-13));
        CHECK(r[0].tau == doctest::Approx(-50.0).epsilon(1e-13));
    }

    SUBCASE("hadamard point: all three passes lie inside the sweep") {
        const auto r = resonance_times({5.8511, 2.9280e-4, 80.0});
        CHECK(r[0].in_window);
        CHECK(r[1].in_window);
        CHECK(r[2].in_window);
        CHECK(r[2].tau == doctest::Approx(58.440572776523053).epsilon(1e-13));
    }

    SUBCASE("weak twist pushes the side passes out of the sweep") {
        const auto r = resonance_times({5.8511, 1e-4, 80.0});  // 1/sqrt(eta4) = 100
        CHECK(r[1].in_window);
        CHECK_FALSE(r[0].in_window);
        CHECK_FALSE(r[2].in_window);
    }

    SUBCASE("roots satisfy the resonance condition to 1e-12") {
        Rng rng(5);
        for (int i = 0; i < 200; ++i) {
            SweepParams p{1.0 + 5.0 * rng.uniform(), 1e-4 + 1e-2 * rng.uniform(), 80.0};
            for (const auto& root : resonance_times(p))
                CHECK(std::abs(root.tau - p.eta4 * root.tau * root.tau * root.tau) < 1e-12);
        }
    }
}

TEST_CASE("parameter validation") {
    const SweepParams bad_lambda{-1.0, 1e-4, 80.0};
    const SweepParams bad_eta{1.0, 0.0, 80.0};
    const SweepParams bad_tau0{1.0, 1e-4, -2.0};
    CHECK_THROWS_AS(bad_lambda.validate(), InputError);
    CHECK_THROWS_AS(bad_eta.validate(), InputError);
    CHECK_THROWS_AS(bad_tau0.validate(), InputError);
    SweepParams sub_adiabatic{0.5, 1e-4, 80.0};
    CHECK_NOTHROW(sub_adiabatic.validate());  // lambda <= 1 is recorded, not rejected
    CHECK_FALSE(sub_adiabatic.non_adiabatic());
    const SweepParams hadamard{5.8511, 2.928e-4, 80.0};
    CHECK(hadamard.non_adiabatic());

    TwoQubitParams q;
    q.sweep = {5.1, 2.4e-4, 120.0};
    q.d1 = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(q.validate(), InputError);
}
