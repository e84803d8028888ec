#include "nlb/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "nlb/state.hpp"

namespace nlb {

RMat3 rotation_of_unitary(const CMat2& u) {
    RMat3 r;
    const CMat2 ud = u.adjoint();
    for (int i = 1; i <= 3; ++i) {
        const CMat2 x = u * pauli(i) * ud;
        for (int j = 1; j <= 3; ++j) {
            r(i - 1, j - 1) = 0.5 * (x * pauli(j)).trace().real();
        }
    }
    return r;
}

namespace {

RMat4 embed_rotation(const RMat3& r) {
    RMat4 m;
    m(0, 0) = 1.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i + 1, j + 1) = r(i, j);
    return m;
}

RMat4 canonical_transfer(const Vec3& t, const Vec3& lam) {
    RMat4 m;
    m(0, 0) = 1.0;
    for (int i = 0; i < 3; ++i) {
        m(i + 1, 0) = t[i];
        m(i + 1, i + 1) = lam[i];
    }
    return m;
}

}  // namespace

TransferMatrix transfer_matrix(const QubitChannel& ch) {
    // rho -> U rho U^dag moves Bloch vectors by R(U)^t in the convention of
    // rotation_of_unitary.
    RMat4 m = canonical_transfer(ch.t, ch.lambda);
    if (ch.post_unitary)
        m = embed_rotation(rotation_of_unitary(*ch.post_unitary).transpose()) * m;
    if (ch.pre_unitary)
        m = m * embed_rotation(rotation_of_unitary(*ch.pre_unitary).transpose());
    return TransferMatrix{m};
}

std::array<double, 4> apply_to_bloch(const QubitChannel& ch, const std::array<double, 4>& bloch) {
    if (std::fabs(bloch[0] - 1.0) > 1e-12)
        throw std::invalid_argument("affine Bloch vector must start with 1");
    const RMat4 m = transfer_matrix(ch).m;
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i] += m(i, j) * bloch[j];
    return out;
}

CMat4 choi_matrix_unchecked(const QubitChannel& ch) {
    if (ch.is_canonical()) {
        // 1/4 (I(x)I + I(x)t.sigma + l1 s1s1 - l2 s2s2 + l3 s3s3), written out
        // so the untouched entries are exact zeros.
        const double t1 = ch.t[0], t2 = ch.t[1], t3 = ch.t[2];
        const double l1 = ch.lambda[0], l2 = ch.lambda[1], l3 = ch.lambda[2];
        CMat4 r;
        r(0, 0) = 0.25 * (1 + t3 + l3);
        r(1, 1) = 0.25 * (1 - t3 - l3);
        r(2, 2) = 0.25 * (1 + t3 - l3);
        r(3, 3) = 0.25 * (1 - t3 + l3);
        r(0, 1) = 0.25 * cplx(t1, -t2);
        r(1, 0) = std::conj(r(0, 1));
        r(2, 3) = r(0, 1);
        r(3, 2) = r(1, 0);
        r(0, 3) = 0.25 * (l1 + l2);
        r(3, 0) = r(0, 3);
        r(1, 2) = 0.25 * (l1 - l2);
        r(2, 1) = r(1, 2);
        return r;
    }
    // Non-canonical: push |Phi+> through the full transfer matrix. Assembled
    // without the state validator so non-CP channels still get a matrix.
    CMat4 phi;
    phi(0, 0) = phi(0, 3) = phi(3, 0) = phi(3, 3) = 0.5;
    const CorrelationTensors ct = correlation_tensors(TwoQubitState::trusted(phi));
    const RMat4 tm = transfer_matrix(ch).m;
    RMat4 out;
    for (int i = 0; i < 4; ++i)
        for (int m = 0; m < 4; ++m) {
            double acc = 0.0;
            for (int n = 0; n < 4; ++n) acc += tm(m, n) * ct.R(i, n);
            out(i, m) = acc;
        }
    CMat4 rho;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (out(i, j) == 0.0) continue;
            rho = rho + (0.25 * out(i, j)) * kron(pauli(i), pauli(j));
        }
    return rho;
}

bool is_completely_positive(const QubitChannel& ch, double tol) {
    return min_eig_hermitian(choi_matrix_unchecked(ch)) >= -tol;
}

bool is_unital(const QubitChannel& ch, double tol) { return norm(ch.t) <= tol; }

TwoQubitState choi_state(const QubitChannel& ch) {
    if (!is_completely_positive(ch))
        throw std::domain_error("channel is not completely positive");
    return TwoQubitState(choi_matrix_unchecked(ch));
}

bool is_entanglement_breaking(const QubitChannel& ch, double tol) {
    if (!is_completely_positive(ch))
        throw std::domain_error("channel is not completely positive");
    const CMat4 pt = partial_transpose_second(choi_matrix_unchecked(ch));
    return min_eig_hermitian(pt) >= -tol;
}

TwoQubitState apply_one_sided(const QubitChannel& ch, const TwoQubitState& rho) {
    if (!is_completely_positive(ch))
        throw std::domain_error("channel is not completely positive");
    const CorrelationTensors ct = correlation_tensors(rho);
    const RMat4 tm = transfer_matrix(ch).m;
    CorrelationTensors out;
    for (int i = 0; i < 4; ++i)
        for (int m = 0; m < 4; ++m) {
            double acc = 0.0;
            for (int n = 0; n < 4; ++n) acc += tm(m, n) * ct.R(i, n);
            out.R(i, m) = acc;
        }
    for (int i = 0; i < 3; ++i) {
        out.r[i] = out.R(i + 1, 0);
        out.s[i] = out.R(0, i + 1);
        for (int j = 0; j < 3; ++j) out.T(i, j) = out.R(i + 1, j + 1);
    }
    return state_from_tensors(out);
}

TransferMatrix compose(const QubitChannel& second, const QubitChannel& first) {
    if (!is_completely_positive(second) || !is_completely_positive(first))
        throw std::domain_error("channel is not completely positive");
    return TransferMatrix{transfer_matrix(second).m * transfer_matrix(first).m};
}

}  // namespace nlb
