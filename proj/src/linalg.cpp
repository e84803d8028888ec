#include "nlb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlb {

namespace {

// One cyclic Jacobi pass family for complex Hermitian matrices. Rotations
// J act as A <- J^dag A J with J mixing the (p,q) plane.
template <int N>
HermEigResult<N> jacobi_hermitian(CMat<N> m) {
    CMat<N> v = CMat<N>::identity();
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < N; ++p)
            for (int q = p + 1; q < N; ++q) off += std::norm(m(p, q));
        if (off < 1e-32 * std::max(1.0, std::norm(m.trace()))) break;

        for (int p = 0; p < N; ++p) {
            for (int q = p + 1; q < N; ++q) {
                const cplx apq = m(p, q);
                const double abs_apq = std::abs(apq);
                if (abs_apq == 0.0) continue;
                const double app = m(p, p).real();
                const double aqq = m(q, q).real();
                const cplx phase = apq / abs_apq;
                const double tau = (aqq - app) / (2.0 * abs_apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sp = s * phase;

                // columns p and q of m and v
                for (int i = 0; i < N; ++i) {
                    const cplx mip = m(i, p), miq = m(i, q);
                    m(i, p) = c * mip - std::conj(sp) * miq;
                    m(i, q) = sp * mip + c * miq;
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - std::conj(sp) * viq;
                    v(i, q) = sp * vip + c * viq;
                }
                // rows p and q of m
                for (int j = 0; j < N; ++j) {
                    const cplx mpj = m(p, j), mqj = m(q, j);
                    m(p, j) = c * mpj - sp * mqj;
                    m(q, j) = std::conj(sp) * mpj + c * mqj;
                }
            }
        }
    }

    std::array<int, N> idx;
    std::iota(idx.begin(), idx.end(), 0);
    std::array<double, N> d;
    for (int i = 0; i < N; ++i) d[i] = m(i, i).real();
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] > d[j]; });

    HermEigResult<N> r;
    for (int k = 0; k < N; ++k) {
        r.values[k] = d[idx[k]];
        for (int i = 0; i < N; ++i) r.vectors(i, k) = v(i, idx[k]);
    }
    return r;
}

template <int N>
void check_hermitian(const CMat<N>& m, double tol) {
    double dev = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
    if (dev > tol) throw std::invalid_argument("matrix is not Hermitian within tolerance");
}

template <int N>
SymEigResult<N> jacobi_symmetric(RMat<N> m) {
    RMat<N> v = RMat<N>::identity();
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < N; ++p)
            for (int q = p + 1; q < N; ++q) off += m(p, q) * m(p, q);
        if (off < 1e-32 * std::max(1.0, m.trace() * m.trace())) break;

        for (int p = 0; p < N; ++p) {
            for (int q = p + 1; q < N; ++q) {
                const double apq = m(p, q);
                if (apq == 0.0) continue;
                const double tau = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int i = 0; i < N; ++i) {
                    const double mip = m(i, p), miq = m(i, q);
                    m(i, p) = c * mip - s * miq;
                    m(i, q) = s * mip + c * miq;
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
                for (int j = 0; j < N; ++j) {
                    const double mpj = m(p, j), mqj = m(q, j);
                    m(p, j) = c * mpj - s * mqj;
                    m(q, j) = s * mpj + c * mqj;
                }
            }
        }
    }

    std::array<int, N> idx;
    std::iota(idx.begin(), idx.end(), 0);
    std::array<double, N> d;
    for (int i = 0; i < N; ++i) d[i] = m(i, i);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] > d[j]; });

    SymEigResult<N> r;
    for (int k = 0; k < N; ++k) {
        r.values[k] = d[idx[k]];
        for (int i = 0; i < N; ++i) r.vectors(i, k) = v(i, idx[k]);
    }
    return r;
}

}  // namespace

HermEigResult<2> eig_hermitian(const CMat2& m, double tol) {
    check_hermitian(m, tol);
    return jacobi_hermitian<2>(m);
}

HermEigResult<4> eig_hermitian(const CMat4& m, double tol) {
    check_hermitian(m, tol);
    return jacobi_hermitian<4>(m);
}

double min_eig_hermitian(const CMat4& m, double tol) {
    return eig_hermitian(m, tol).values[3];
}

SymEigResult<3> eig_symmetric(const RMat3& m) { return jacobi_symmetric<3>(m); }
SymEigResult<4> eig_symmetric(const RMat4& m) { return jacobi_symmetric<4>(m); }

namespace {

// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
// Classic hqr scheme specialized to n = 4.
std::array<cplx, 4> hqr4(RMat4 h) {
    constexpr int n = 4;
    constexpr double eps = 2.22e-16;
    std::array<cplx, 4> out{};
    int nn = n - 1;
    int iters = 0;

    auto two_by_two = [&](int lo) {
        const double a = h(lo, lo), b = h(lo, lo + 1);
        const double c = h(lo + 1, lo), d = h(lo + 1, lo + 1);
        const double tr = a + d;
        const double det = a * d - b * c;
        const double disc = tr * tr / 4.0 - det;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            double r1 = tr / 2.0 + (tr >= 0.0 ? sq : -sq);
            double r2 = (r1 != 0.0) ? det / r1 : tr - r1;
            out[lo] = cplx(r1, 0.0);
            out[lo + 1] = cplx(r2, 0.0);
        } else {
            const double sq = std::sqrt(-disc);
            out[lo] = cplx(tr / 2.0, sq);
            out[lo + 1] = cplx(tr / 2.0, -sq);
        }
    };

    while (nn >= 0) {
        if (++iters > 200) throw std::runtime_error("eig_general_real: QR did not converge");

        // find the largest lo such that the subdiagonal entry below lo-1 is negligible
        int lo = nn;
        while (lo > 0) {
            const double s = std::fabs(h(lo - 1, lo - 1)) + std::fabs(h(lo, lo));
            if (std::fabs(h(lo, lo - 1)) <= eps * std::max(s, 1e-300)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }

        if (lo == nn) {
            out[nn] = cplx(h(nn, nn), 0.0);
            --nn;
            iters = 0;
            continue;
        }
        if (lo == nn - 1) {
            two_by_two(lo);
            nn -= 2;
            iters = 0;
            continue;
        }

        // Francis double shift from the trailing 2x2 of the active block
        double s = h(nn - 1, nn - 1) + h(nn, nn);
        double p = h(nn - 1, nn - 1) * h(nn, nn) - h(nn - 1, nn) * h(nn, nn - 1);
        if (iters % 12 == 0 && iters > 0) {
            // exceptional shift
            const double w = std::fabs(h(nn, nn - 1)) + std::fabs(h(nn - 1, nn - 2));
            s = 2.0 * (h(nn, nn) + 0.75 * w);
            p = (h(nn, nn) + 0.75 * w) * (h(nn, nn) + 0.75 * w) - 0.4375 * w * w;
        }

        // first column of (H - aI)(H - bI)
        double x = h(lo, lo) * h(lo, lo) + h(lo, lo + 1) * h(lo + 1, lo) - s * h(lo, lo) + p;
        double y = h(lo + 1, lo) * (h(lo, lo) + h(lo + 1, lo + 1) - s);
        double z = (lo + 2 <= nn) ? h(lo + 2, lo + 1) * h(lo + 1, lo) : 0.0;

        for (int k = lo; k <= nn - 1; ++k) {
            // Householder on (x, y, z)
            const double scale = std::fabs(x) + std::fabs(y) + std::fabs(z);
            if (scale == 0.0) {
                x = h(k + 1, k);
                y = (k + 2 <= nn) ? h(k + 2, k) : 0.0;
                z = (k + 3 <= nn) ? h(k + 3, k) : 0.0;
                continue;
            }
            const double xs = x / scale, ys = y / scale, zs = z / scale;
            double alpha = std::sqrt(xs * xs + ys * ys + zs * zs);
            if (xs > 0.0) alpha = -alpha;
            const double v0 = xs - alpha, v1 = ys, v2 = zs;
            const double vv = v0 * v0 + v1 * v1 + v2 * v2;
            if (vv == 0.0) continue;
            const double beta = 2.0 / vv;

            // apply P = I - beta v v^T from the left ...
            for (int j = std::max(lo, k - 1); j < n; ++j) {
                double acc = v0 * h(k, j);
                if (k + 1 <= nn) acc += v1 * h(k + 1, j);
                if (k + 2 <= nn) acc += v2 * h(k + 2, j);
                acc *= beta;
                h(k, j) -= acc * v0;
                if (k + 1 <= nn) h(k + 1, j) -= acc * v1;
                if (k + 2 <= nn) h(k + 2, j) -= acc * v2;
            }
            // ... and from the right
            for (int i = 0; i <= std::min(nn, k + 3); ++i) {
                double acc = v0 * h(i, k);
                if (k + 1 <= nn) acc += v1 * h(i, k + 1);
                if (k + 2 <= nn) acc += v2 * h(i, k + 2);
                acc *= beta;
                h(i, k) -= acc * v0;
                if (k + 1 <= nn) h(i, k + 1) -= acc * v1;
                if (k + 2 <= nn) h(i, k + 2) -= acc * v2;
            }

            x = h(k + 1, k);
            y = (k + 2 <= nn) ? h(k + 2, k) : 0.0;
            z = (k + 3 <= nn) ? h(k + 3, k) : 0.0;
        }
    }
    return out;
}

}  // namespace

std::array<cplx, 4> eig_general_real(const RMat4& m) {
    // Householder reduction to upper Hessenberg, then QR.
    RMat4 h = m;
    for (int k = 0; k < 2; ++k) {
        double scale = 0.0;
        for (int i = k + 2; i < 4; ++i) scale += std::fabs(h(i, k));
        if (scale == 0.0) continue;
        std::array<double, 4> v{};
        double norm2 = 0.0;
        for (int i = k + 1; i < 4; ++i) {
            v[i] = h(i, k) / scale;
            norm2 += v[i] * v[i];
        }
        double alpha = std::sqrt(norm2);
        if (v[k + 1] > 0.0) alpha = -alpha;
        v[k + 1] -= alpha;
        double vv = 0.0;
        for (int i = k + 1; i < 4; ++i) vv += v[i] * v[i];
        if (vv == 0.0) continue;
        const double beta = 2.0 / vv;
        // H <- P H P with P = I - beta v v^T (v supported on k+1..3)
        for (int j = 0; j < 4; ++j) {
            double acc = 0.0;
            for (int i = k + 1; i < 4; ++i) acc += v[i] * h(i, j);
            acc *= beta;
            for (int i = k + 1; i < 4; ++i) h(i, j) -= acc * v[i];
        }
        for (int i = 0; i < 4; ++i) {
            double acc = 0.0;
            for (int j = k + 1; j < 4; ++j) acc += v[j] * h(i, j);
            acc *= beta;
            for (int j = k + 1; j < 4; ++j) h(i, j) -= acc * v[j];
        }
        for (int i = k + 2; i < 4; ++i) h(i, k) = 0.0;
        h(k + 1, k) = alpha * scale;
    }
    return hqr4(h);
}

std::array<double, 4> real_eigs_descending(const std::array<cplx, 4>& eigs, double imag_tol) {
    double scale = 0.0;
    for (const cplx& e : eigs) scale = std::max(scale, std::abs(e));
    std::array<double, 4> r;
    for (int i = 0; i < 4; ++i) {
        if (std::fabs(eigs[i].imag()) > imag_tol * std::max(1.0, scale))
            throw std::domain_error("eigenvalues failed the reality check");
        r[i] = eigs[i].real();
    }
    std::sort(r.begin(), r.end(), std::greater<>());
    return r;
}

std::array<double, 3> singular_values(const RMat3& m) {
    RMat3 mtm;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += m(k, i) * m(k, j);
            mtm(i, j) = s;
        }
    const auto eig = eig_symmetric(mtm);
    std::array<double, 3> sv;
    for (int i = 0; i < 3; ++i) sv[i] = std::sqrt(std::max(0.0, eig.values[i]));
    return sv;
}

CMat4 kron(const CMat2& a, const CMat2& b) {
    CMat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

CMat4 partial_transpose_second(const CMat4& rho) {
    CMat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    r(2 * i + k, 2 * j + l) = rho(2 * i + l, 2 * j + k);
    return r;
}

CMat2 partial_trace_first(const CMat4& rho) {
    CMat2 r;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) r(k, l) = rho(k, l) + rho(2 + k, 2 + l);
    return r;
}

CMat2 partial_trace_second(const CMat4& rho) {
    CMat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
    return r;
}

}  // namespace nlb
