#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace trp {

using cplx = std::complex<double>;

template <std::size_t N>
using cvec = std::array<cplx, N>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Dense complex N x N matrix, row-major, value semantics. Sized for the
/// 2x2 / 4x4 matrices this library works with; everything stays on the stack.
template <std::size_t N>
class cmat {
  public:
    cmat() : e_{} {}

    static cmat zero() { return cmat{}; }

    static cmat identity() {
        cmat m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    cplx& operator()(std::size_t r, std::size_t c) { return e_[r * N + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return e_[r * N + c]; }

    static constexpr std::size_t dim() { return N; }

    cmat& operator+=(const cmat& o) {
        for (std::size_t i = 0; i < N * N; ++i) e_[i] += o.e_[i];
        return *this;
    }
    cmat& operator-=(const cmat& o) {
        for (std::size_t i = 0; i < N * N; ++i) e_[i] -= o.e_[i];
        return *this;
    }
    cmat& operator*=(cplx s) {
        for (std::size_t i = 0; i < N * N; ++i) e_[i] *= s;
        return *this;
    }

    friend cmat operator+(cmat a, const cmat& b) { return a += b; }
    friend cmat operator-(cmat a, const cmat& b) { return a -= b; }
    friend cmat operator*(cplx s, cmat a) { return a *= s; }
    friend cmat operator*(cmat a, cplx s) { return a *= s; }

    friend cmat operator*(const cmat& a, const cmat& b) {
        cmat r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    friend cvec<N> operator*(const cmat& a, const cvec<N>& v) {
        cvec<N> r{};
        for (std::size_t i = 0; i < N; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < N; ++j) s += a(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

  private:
    std::array<cplx, N * N> e_;
};

template <std::size_t N>
cmat<N> adjoint(const cmat<N>& a) {
    cmat<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj(a(j, i));
    return r;
}

template <std::size_t N>
cplx trace(const cmat<N>& a) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += a(i, i);
    return s;
}

/// A^dagger * B without forming the adjoint.
template <std::size_t N>
cmat<N> dagger_mul(const cmat<N>& a, const cmat<N>& b) {
    cmat<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < N; ++k) s += std::conj(a(k, i)) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

template <std::size_t N>
double frobenius_norm(const cmat<N>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

template <std::size_t N>
double max_abs(const cmat<N>& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) m = std::max(m, std::abs(a(i, j)));
    return m;
}

/// <a|b> with the physics convention: conjugate the first argument.
template <std::size_t N>
cplx vdot(const cvec<N>& a, const cvec<N>& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

template <std::size_t N>
double vnorm(const cvec<N>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += std::norm(a[i]);
    return std::sqrt(s);
}

template <std::size_t N>
cvec<N> normalized(cvec<N> a) {
    const double n = vnorm(a);
    for (auto& x : a) x /= n;
    return a;
}

/// Column k of a matrix, as a vector.
template <std::size_t N>
cvec<N> column(const cmat<N>& a, std::size_t k) {
    cvec<N> v;
    for (std::size_t i = 0; i < N; ++i) v[i] = a(i, k);
    return v;
}

/// Tensor product, first factor on the most significant slot.
inline cmat<4> kron(const cmat<2>& a, const cmat<2>& b) {
    cmat<4> r;
    for (std::size_t i1 = 0; i1 < 2; ++i1)
        for (std::size_t i2 = 0; i2 < 2; ++i2)
            for (std::size_t j1 = 0; j1 < 2; ++j1)
                for (std::size_t j2 = 0; j2 < 2; ++j2)
                    r(2 * i1 + i2, 2 * j1 + j2) = a(i1, j1) * b(i2, j2);
    return r;
}

namespace pauli {

inline cmat<2> x() {
    cmat<2> m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

inline cmat<2> y() {
    cmat<2> m;
    m(0, 1) = cplx(0.0, -1.0);
    m(1, 0) = cplx(0.0, 1.0);
    return m;
}

inline cmat<2> z() {
    cmat<2> m;
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

inline cmat<2> id() { return cmat<2>::identity(); }

}  // namespace pauli

}  // namespace trp
