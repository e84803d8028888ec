#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "nlb/kernels.hpp"
#include "nlb/linalg.hpp"
#include "nlb/rng.hpp"

// Helpers shared by the scalar and SIMD kernel translation units. Everything
// here is inline so each TU compiles it with its own instruction set.

namespace nlb::kern {

// Smallest eigenvalue of a symmetric 3x3 matrix (Cardano / trig form).
inline double sym3_min_eig(double u00, double u01, double u02, double u11, double u12,
                           double u22) {
    const double off2 = u01 * u01 + u02 * u02 + u12 * u12;
    const double q = (u00 + u11 + u22) / 3.0;
    if (off2 <= 1e-30 * std::max(1.0, q * q))
        return std::min(u00, std::min(u11, u22));
    const double d0 = u00 - q, d1 = u11 - q, d2 = u22 - q;
    const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * off2;
    const double p = std::sqrt(p2 / 6.0);
    const double inv = 1.0 / p;
    const double b00 = d0 * inv, b11 = d1 * inv, b22 = d2 * inv;
    const double b01 = u01 * inv, b02 = u02 * inv, b12 = u12 * inv;
    double r = 0.5 * (b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) +
                      b02 * (b01 * b12 - b11 * b02));
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    return q + 2.0 * p * std::cos(phi + 2.0943951023931953);  // + 2 pi / 3
}

// Row data of R(alpha, beta, gamma) = Rz(a) Ry(b) Rz(g) scaled by dc, plus
// the Gram matrix of the first two rows.
struct RSetup {
    double g00, g01, g02, g11, g12, g22;  // B0^t B0 + B1^t B1
    double b20, b21, b22;                 // third row of R * diag(dc)
};

inline RSetup r_setup(double ca, double sa, double cb, double sb, double cg, double sg,
                      const Vec3& dc) {
    const double r00 = ca * cb * cg - sa * sg;
    const double r01 = -ca * cb * sg - sa * cg;
    const double r02 = ca * sb;
    const double r10 = sa * cb * cg + ca * sg;
    const double r11 = -sa * cb * sg + ca * cg;
    const double r12 = sa * sb;
    const double r20 = -sb * cg;
    const double r21 = sb * sg;
    const double r22 = cb;

    const double b00 = r00 * dc[0], b01 = r01 * dc[1], b02 = r02 * dc[2];
    const double b10 = r10 * dc[0], b11 = r11 * dc[1], b12 = r12 * dc[2];

    RSetup s;
    s.g00 = b00 * b00 + b10 * b10;
    s.g01 = b00 * b01 + b10 * b11;
    s.g02 = b00 * b02 + b10 * b12;
    s.g11 = b01 * b01 + b11 * b11;
    s.g12 = b01 * b02 + b11 * b12;
    s.g22 = b02 * b02 + b12 * b12;
    s.b20 = r20 * dc[0];
    s.b21 = r21 * dc[1];
    s.b22 = r22 * dc[2];
    return s;
}

// M value (sum of the two largest eigenvalues of T^t T) for one grid point.
inline double sweep_point_m(const RSetup& s, const Vec3& t, double alpha_sq, double mcoef) {
    const double v0 = s.b20 + mcoef * t[0];
    const double v1 = s.b21 + mcoef * t[1];
    const double v2 = s.b22 + mcoef * t[2];
    const double u00 = alpha_sq * s.g00 + v0 * v0;
    const double u01 = alpha_sq * s.g01 + v0 * v1;
    const double u02 = alpha_sq * s.g02 + v0 * v2;
    const double u11 = alpha_sq * s.g11 + v1 * v1;
    const double u12 = alpha_sq * s.g12 + v1 * v2;
    const double u22 = alpha_sq * s.g22 + v2 * v2;
    const double tr = u00 + u11 + u22;
    return tr - sym3_min_eig(u00, u01, u02, u11, u12, u22);
}

// Draw for sample index i: uniforms in [-1, 1], order (t1,t2,t3,l1,l2,l3).
// Unital mode keeps the same block layout and zeroes t.
inline void draw_candidate(const Philox4x32& rng, std::uint64_t index, bool unital, Vec3& t,
                           Vec3& lam) {
    if (unital) {
        const auto u0 = rng.uniform2(2 * index);
        const auto u1 = rng.uniform2(2 * index + 1);
        t = {0.0, 0.0, 0.0};
        lam = {2.0 * u0[0] - 1.0, 2.0 * u0[1] - 1.0, 2.0 * u1[0] - 1.0};
    } else {
        const auto u0 = rng.uniform2(3 * index);
        const auto u1 = rng.uniform2(3 * index + 1);
        const auto u2 = rng.uniform2(3 * index + 2);
        t = {2.0 * u0[0] - 1.0, 2.0 * u0[1] - 1.0, 2.0 * u1[0] - 1.0};
        lam = {2.0 * u1[1] - 1.0, 2.0 * u2[0] - 1.0, 2.0 * u2[1] - 1.0};
    }
}

// Complete positivity of a canonical channel via characteristic
// coefficients: a Hermitian H has min eig >= -tol iff every elementary
// symmetric function of H + tol I is non-negative. The Choi matrix here has
// diag d0..d3, u = (t1 - i t2)/4 at (0,1) and (2,3), g = (l1+l2)/4 at
// (0,3), f = (l1-l2)/4 at (1,2).
inline bool choi_etest(double t1, double t2, double t3, double l1, double l2, double l3,
                       double tol) {
    const double d0 = 0.25 * (1.0 + t3 + l3) + tol;
    const double d1 = 0.25 * (1.0 - t3 - l3) + tol;
    const double d2 = 0.25 * (1.0 + t3 - l3) + tol;
    const double d3 = 0.25 * (1.0 - t3 + l3) + tol;
    const double uu = (t1 * t1 + t2 * t2) * 0.0625;      // |u|^2 = (t1^2+t2^2)/16
    const double re_u2 = (t1 * t1 - t2 * t2) * 0.0625;   // Re(u^2)
    const double g = 0.25 * (l1 + l2);
    const double f = 0.25 * (l1 - l2);

    if (d0 < 0.0 || d1 < 0.0 || d2 < 0.0 || d3 < 0.0) return false;

    const double e2 = d0 * d1 + d0 * d2 + d0 * d3 + d1 * d2 + d1 * d3 + d2 * d3 -
                      (2.0 * uu + g * g + f * f);
    if (e2 < 0.0) return false;

    const double m012 = d0 * d1 * d2 - d0 * f * f - uu * d2;
    const double m013 = d0 * d1 * d3 - uu * d3 - g * g * d1;
    const double m023 = d0 * d2 * d3 - d0 * uu - g * g * d2;
    const double m123 = d1 * d2 * d3 - d1 * uu - f * f * d3;
    if (m012 + m013 + m023 + m123 < 0.0) return false;

    const double det = d0 * m123 - uu * (d2 * d3 - uu) - 2.0 * f * g * re_u2 -
                       d1 * d2 * g * g + f * f * g * g;
    return det >= 0.0;
}

struct ClassFlags {
    bool eb, nlb_mes, snlb;
};

// EB / NLB-MES / SNLB verdicts for a CP-accepted candidate. Shared by both
// kernel variants so only the CP sieve differs between them.
inline ClassFlags classify_accepted(const Vec3& t, const Vec3& lam, double cp_tol) {
    ClassFlags out{};

    // partial transpose flips t2 and l2
    out.eb = choi_etest(t[0], -t[1], t[2], lam[0], -lam[1], lam[2], cp_tol);

    double s0 = lam[0] * lam[0], s1 = lam[1] * lam[1], s2 = lam[2] * lam[2];
    if (s0 < s1) std::swap(s0, s1);
    if (s0 < s2) std::swap(s0, s2);
    if (s1 < s2) std::swap(s1, s2);
    out.nlb_mes = s0 + s1 <= 1.0 + 1e-12;

    // C = M R M R^t for the Choi state, an arrow matrix
    RMat4 c;
    c(0, 0) = 1.0 - (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
    const double a1 = lam[0] * t[0], a2 = lam[1] * t[1], a3 = lam[2] * t[2];
    c(0, 1) = -a1; c(0, 2) = a2; c(0, 3) = -a3;
    c(1, 0) = a1;  c(2, 0) = -a2; c(3, 0) = a3;
    c(1, 1) = lam[0] * lam[0];
    c(2, 2) = lam[1] * lam[1];
    c(3, 3) = lam[2] * lam[2];
    std::array<double, 4> ev;
    try {
        ev = real_eigs_descending(eig_general_real(c));
    } catch (const std::domain_error&) {
        // CP-accepted states have a real C spectrum; treat residual failures
        // (boundary rounding) as non-SNLB conservatively.
        out.snlb = false;
        return out;
    }
    out.snlb = ev[1] + ev[2] <= ev[0] * (1.0 + 1e-12);
    return out;
}

}  // namespace nlb::kern
