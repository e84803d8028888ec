#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

// Fixed-size dense matrices over double / complex<double>, row-major.
// Only the dimensions this library needs (2 and 4 complex, 3 and 4 real);
// general n-by-n linear algebra is out of scope.

namespace nlb {

using cplx = std::complex<double>;

template <int N>
struct CMat {
    static_assert(N == 2 || N == 4, "only 2x2 and 4x4 complex matrices");
    std::array<cplx, N * N> a{};

    static constexpr int dim = N;

    cplx& operator()(int i, int j) { return a[i * N + j]; }
    const cplx& operator()(int i, int j) const { return a[i * N + j]; }

    static CMat identity() {
        CMat m;
        for (int i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static CMat zero() { return CMat{}; }

    CMat adjoint() const {
        CMat m;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) m(i, j) = std::conj((*this)(j, i));
        return m;
    }

    CMat transpose() const {
        CMat m;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) m(i, j) = (*this)(j, i);
        return m;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (int i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& v : a) m = std::max(m, std::abs(v));
        return m;
    }

    friend CMat operator+(const CMat& x, const CMat& y) {
        CMat r;
        for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
        return r;
    }
    friend CMat operator-(const CMat& x, const CMat& y) {
        CMat r;
        for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
        return r;
    }
    friend CMat operator*(const CMat& x, const CMat& y) {
        CMat r;
        for (int i = 0; i < N; ++i)
            for (int k = 0; k < N; ++k) {
                const cplx xik = x(i, k);
                if (xik == cplx{}) continue;
                for (int j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
            }
        return r;
    }
    friend CMat operator*(cplx s, const CMat& x) {
        CMat r;
        for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = s * x.a[i];
        return r;
    }
    friend CMat operator*(double s, const CMat& x) { return cplx(s, 0.0) * x; }
};

using CMat2 = CMat<2>;
using CMat4 = CMat<4>;

template <int N>
struct RMat {
    static_assert(N == 3 || N == 4, "only 3x3 and 4x4 real matrices");
    std::array<double, N * N> a{};

    static constexpr int dim = N;

    double& operator()(int i, int j) { return a[i * N + j]; }
    const double& operator()(int i, int j) const { return a[i * N + j]; }

    static RMat identity() {
        RMat m;
        for (int i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static RMat zero() { return RMat{}; }

    RMat transpose() const {
        RMat m;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) m(i, j) = (*this)(j, i);
        return m;
    }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : a) m = std::max(m, std::fabs(v));
        return m;
    }

    friend RMat operator+(const RMat& x, const RMat& y) {
        RMat r;
        for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
        return r;
    }
    friend RMat operator-(const RMat& x, const RMat& y) {
        RMat r;
        for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
        return r;
    }
    friend RMat operator*(const RMat& x, const RMat& y) {
        RMat r;
        for (int i = 0; i < N; ++i)
            for (int k = 0; k < N; ++k) {
                const double xik = x(i, k);
                for (int j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
            }
        return r;
    }
    friend RMat operator*(double s, const RMat& x) {
        RMat r;
        for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = s * x.a[i];
        return r;
    }
};

using RMat3 = RMat<3>;
using RMat4 = RMat<4>;

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& x, const Vec3& y) {
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}
inline double norm(const Vec3& x) { return std::sqrt(dot(x, x)); }

inline Vec3 mul(const RMat3& m, const Vec3& v) {
    Vec3 r{};
    for (int i = 0; i < 3; ++i) r[i] = m(i, 0) * v[0] + m(i, 1) * v[1] + m(i, 2) * v[2];
    return r;
}

// Pauli matrices; index 0 is the identity.
inline const CMat2& pauli(int i) {
    static const std::array<CMat2, 4> p = [] {
        std::array<CMat2, 4> q{};
        q[0] = CMat2::identity();
        q[1](0, 1) = 1.0; q[1](1, 0) = 1.0;
        q[2](0, 1) = cplx(0.0, -1.0); q[2](1, 0) = cplx(0.0, 1.0);
        q[3](0, 0) = 1.0; q[3](1, 1) = -1.0;
        return q;
    }();
    return p[i];
}

}  // namespace nlb
