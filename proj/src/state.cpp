#include "nlb/state.hpp"

#include <cmath>

#include "detail/nelder_mead.hpp"

namespace nlb {

TwoQubitState::TwoQubitState(const CMat4& rho) : rho_(rho) {
    double herm_dev = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            herm_dev = std::max(herm_dev, std::abs(rho(i, j) - std::conj(rho(j, i))));
    if (herm_dev > kStateTol)
        throw std::invalid_argument("state is not Hermitian within tolerance");
    if (std::abs(rho.trace() - cplx(1.0, 0.0)) > kStateTol)
        throw std::invalid_argument("state trace differs from 1");
    if (min_eig_hermitian(rho, kStateTol) < -kStateTol)
        throw std::invalid_argument("state has a negative eigenvalue");
}

CorrelationTensors correlation_tensors(const TwoQubitState& state) {
    const CMat4& rho = state.rho();
    CorrelationTensors ct;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const CMat4 op = kron(pauli(i), pauli(j));
            cplx tr = 0.0;
            for (int p = 0; p < 4; ++p)
                for (int q = 0; q < 4; ++q) tr += rho(p, q) * op(q, p);
            ct.R(i, j) = tr.real();
        }
    }
    for (int i = 0; i < 3; ++i) {
        ct.r[i] = ct.R(i + 1, 0);
        ct.s[i] = ct.R(0, i + 1);
        for (int j = 0; j < 3; ++j) ct.T(i, j) = ct.R(i + 1, j + 1);
    }
    return ct;
}

TwoQubitState state_from_tensors(const CorrelationTensors& ct) {
    CMat4 rho;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (ct.R(i, j) == 0.0) continue;
            const CMat4 op = kron(pauli(i), pauli(j));
            rho = rho + (0.25 * ct.R(i, j)) * op;
        }
    return TwoQubitState(rho);
}

double horodecki_M(const TwoQubitState& rho) {
    const RMat3 T = correlation_tensors(rho).T;
    RMat3 u;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += T(k, i) * T(k, j);
            u(i, j) = s;
        }
    const auto eig = eig_symmetric(u);
    return eig.values[0] + eig.values[1];
}

namespace {

Vec3 unit_from_angles(double theta, double phi) {
    const double st = std::sin(theta);
    return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

// Bell value with Bob's settings optimal in closed form:
// max_{b,b'} tr(rho B) = |T^t(a + a')| + |T^t(a - a')|.
double bell_value_given_alice(const RMat3& T, const Vec3& a, const Vec3& ap) {
    Vec3 plus, minus;
    for (int i = 0; i < 3; ++i) {
        double tp = 0.0, tm = 0.0;
        for (int k = 0; k < 3; ++k) {
            tp += T(k, i) * (a[k] + ap[k]);
            tm += T(k, i) * (a[k] - ap[k]);
        }
        plus[i] = tp;
        minus[i] = tm;
    }
    return norm(plus) + norm(minus);
}

}  // namespace

double chsh_bruteforce(const TwoQubitState& rho, const ChshGrid& grid) {
    if (grid.points_per_angle < 2) throw std::invalid_argument("empty CHSH search grid");
    const RMat3 T = correlation_tensors(rho).T;
    const int P = grid.points_per_angle;

    double best = -1.0;
    std::array<double, 4> best_ang{};
    for (int it = 0; it < P; ++it) {
        const double theta_a = M_PI * it / (P - 1);
        for (int ip = 0; ip < P; ++ip) {
            const double phi_a = 2.0 * M_PI * ip / P;
            const Vec3 a = unit_from_angles(theta_a, phi_a);
            for (int jt = 0; jt < P; ++jt) {
                const double theta_b = M_PI * jt / (P - 1);
                for (int jp = 0; jp < P; ++jp) {
                    const double phi_b = 2.0 * M_PI * jp / P;
                    const double v = bell_value_given_alice(T, a, unit_from_angles(theta_b, phi_b));
                    if (v > best) {
                        best = v;
                        best_ang = {theta_a, phi_a, theta_b, phi_b};
                    }
                }
            }
        }
    }

    if (grid.refine) {
        auto neg = [&](const std::array<double, 4>& ang) {
            return -bell_value_given_alice(T, unit_from_angles(ang[0], ang[1]),
                                           unit_from_angles(ang[2], ang[3]));
        };
        const auto [ang, fmin] = detail::nelder_mead_min<4>(neg, best_ang, 0.05);
        (void)ang;
        best = std::max(best, -fmin);
    }
    return best;
}

cplx det2(const CMat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

TwoQubitState apply_filter(const TwoQubitState& rho, const Filter& f) {
    const CMat4 op = kron(f.a, f.b);
    const CMat4 out = op * rho.rho() * op.adjoint();
    const double tr = out.trace().real();
    if (tr <= kNormFloor) throw std::domain_error("filter annihilates the state");
    return TwoQubitState((1.0 / tr) * out);
}

RMat4 lorentz_of_filter(const CMat2& a) {
    const double abs_det = std::abs(det2(a));
    if (abs_det < 1e-15 * std::max(1.0, a.max_abs() * a.max_abs()))
        throw std::domain_error("filter is singular");

    static const CMat4 Tb = [] {
        const double s = 1.0 / std::sqrt(2.0);
        CMat4 t;
        t(0, 0) = s; t(0, 3) = s;
        t(1, 1) = s; t(1, 2) = s;
        t(2, 1) = cplx(0.0, s); t(2, 2) = cplx(0.0, -s);
        t(3, 0) = s; t(3, 3) = -s;
        return t;
    }();

    CMat2 aconj;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) aconj(i, j) = std::conj(a(i, j));
    const CMat4 l = Tb * kron(a, aconj) * Tb.adjoint();

    RMat4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const cplx v = l(i, j) * (1.0 / abs_det);
            if (std::fabs(v.imag()) > 1e-10)
                throw std::domain_error("Lorentz transform has a residual imaginary part");
            out(i, j) = v.real();
        }
    return out;
}

namespace {

// Spectrum of C = M R M R^t when R = [[1, s^t], [0, diag(d)]] and the
// coupling s has a single nonzero component k: the axes other than k stay
// decoupled with eigenvalue d_i^2 and the (0, k) block is a quadratic whose
// near-zero discriminant is collapsed, which keeps the degenerate families
// exact to machine precision.
std::array<double, 4> axis_arrow_spectrum(double c00, const Vec3& d, int k, double /*sk*/) {
    std::array<double, 4> v;
    int n = 0;
    for (int i = 0; i < 3; ++i)
        if (i != k) v[n++] = d[i] * d[i];
    const double dk2 = d[k] * d[k];
    const double tr = c00 + dk2;
    const double det = dk2;  // (1 - sk^2) dk^2 + dk^2 sk^2
    double disc = tr * tr - 4.0 * det;
    const double clamp = 1e-14 * std::max(tr * tr, 4.0 * std::fabs(det));
    if (std::fabs(disc) <= clamp) disc = 0.0;
    if (disc < 0.0) disc = 0.0;
    const double sq = std::sqrt(disc);
    v[2] = 0.5 * (tr + sq);
    v[3] = 0.5 * (tr - sq);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

}  // namespace

CSpectrum c_spectrum(const TwoQubitState& rho) {
    const CorrelationTensors ct = correlation_tensors(rho);

    constexpr double struct_tol = 1e-12;
    const bool r_zero = std::fabs(ct.r[0]) <= struct_tol && std::fabs(ct.r[1]) <= struct_tol &&
                        std::fabs(ct.r[2]) <= struct_tol;
    bool t_diag = true;
    for (int i = 0; i < 3 && t_diag; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && std::fabs(ct.T(i, j)) > struct_tol) {
                t_diag = false;
                break;
            }

    std::array<double, 4> vals;
    int coupled = -1, n_coupled = 0;
    for (int i = 0; i < 3; ++i)
        if (std::fabs(ct.s[i]) > struct_tol) {
            coupled = i;
            ++n_coupled;
        }

    if (r_zero && t_diag && n_coupled <= 1) {
        const Vec3 d{ct.T(0, 0), ct.T(1, 1), ct.T(2, 2)};
        const double c00 = 1.0 - dot(ct.s, ct.s);
        if (n_coupled == 0) {
            vals = {c00, d[0] * d[0], d[1] * d[1], d[2] * d[2]};
            std::sort(vals.begin(), vals.end(), std::greater<>());
        } else {
            vals = axis_arrow_spectrum(c00, d, coupled, ct.s[coupled]);
        }
    } else {
        static const RMat4 Mink = [] {
            RMat4 m;
            m(0, 0) = 1.0;
            m(1, 1) = m(2, 2) = m(3, 3) = -1.0;
            return m;
        }();
        const RMat4 C = Mink * ct.R * Mink * ct.R.transpose();
        vals = real_eigs_descending(eig_general_real(C));
    }

    CSpectrum cs;
    for (int i = 0; i < 4; ++i) {
        double v = vals[i];
        if (v < 0.0) {
            if (v <= -1e-8) throw std::domain_error("C spectrum has a significant negative eigenvalue");
            v = 0.0;
        }
        cs.values[i] = v;
    }
    cs.ratio = (cs.values[0] < kLambda0Floor)
                   ? 0.0
                   : (cs.values[1] + cs.values[2]) / cs.values[0];
    return cs;
}

HiddenNonlocality hidden_nonlocality(const TwoQubitState& rho) {
    const CSpectrum cs = c_spectrum(rho);
    HiddenNonlocality h;
    if (cs.values[0] < kLambda0Floor) return h;  // separable product normal form
    h.violates = cs.values[1] + cs.values[2] > cs.values[0] * (1.0 + kRelTol);
    h.optimal_violation = 2.0 * std::sqrt(cs.ratio);
    return h;
}

}  // namespace nlb
