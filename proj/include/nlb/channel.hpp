#pragma once

#include <array>
#include <optional>

#include "nlb/linalg.hpp"
#include "nlb/matrices.hpp"

// Qubit channels in the canonical affine form: a Bloch-vector translation t
// and per-axis scalings lambda, optionally sandwiched between single-qubit
// unitaries. Choi states, complete positivity, one-sided action on two-qubit
// states and transfer-matrix composition live here.

namespace nlb {

class TwoQubitState;

inline constexpr double kCpTol = 1e-10;

struct QubitChannel {
    Vec3 t{0.0, 0.0, 0.0};
    Vec3 lambda{1.0, 1.0, 1.0};
    std::optional<CMat2> pre_unitary;   // acts before the canonical map
    std::optional<CMat2> post_unitary;  // acts after it

    bool is_canonical() const { return !pre_unitary && !post_unitary; }

    static QubitChannel canonical(const Vec3& t, const Vec3& lambda) {
        return QubitChannel{t, lambda, std::nullopt, std::nullopt};
    }
    static QubitChannel identity() { return canonical({0, 0, 0}, {1, 1, 1}); }
    static QubitChannel depolarizing() { return canonical({0, 0, 0}, {0, 0, 0}); }
};

// 4x4 affine Bloch-space matrix; first row is (1, 0, 0, 0).
struct TransferMatrix {
    RMat4 m = RMat4::identity();
};

// Rotation R with U sigma_i U^dag = sum_j R_ij sigma_j for U in SU(2)
// (defined up to phase for any unitary U).
RMat3 rotation_of_unitary(const CMat2& u);

TransferMatrix transfer_matrix(const QubitChannel& ch);

// Affine action on (1, x, y, z); throws if the first component is not 1.
std::array<double, 4> apply_to_bloch(const QubitChannel& ch, const std::array<double, 4>& bloch);

// (I (x) ch)(|Phi+><Phi+|). Throws if the channel is not completely positive.
TwoQubitState choi_state(const QubitChannel& ch);

// Choi matrix without the CP gate, for samplers that reject afterwards.
CMat4 choi_matrix_unchecked(const QubitChannel& ch);

bool is_completely_positive(const QubitChannel& ch, double tol = kCpTol);
bool is_unital(const QubitChannel& ch, double tol = kCpTol);

// Separability of the Choi state, decided by the partial transpose
// (exact for two qubits). Throws on non-CP channels.
bool is_entanglement_breaking(const QubitChannel& ch, double tol = kCpTol);

// (I (x) ch)(rho): the channel acts on the second tensor factor.
TwoQubitState apply_one_sided(const QubitChannel& ch, const TwoQubitState& rho);

// transfer_matrix(second) * transfer_matrix(first)
TransferMatrix compose(const QubitChannel& second, const QubitChannel& first);

}  // namespace nlb
