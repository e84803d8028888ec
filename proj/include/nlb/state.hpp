#pragma once

#include <array>
#include <stdexcept>

#include "nlb/linalg.hpp"
#include "nlb/matrices.hpp"

// Two-qubit state analysis: Pauli decomposition, the Horodecki CHSH
// criterion, a brute-force CHSH maximizer used as its oracle, local
// filtering, Lorentz transforms of the R matrix, and the hidden-nonlocality
// spectrum condition.

namespace nlb {

inline constexpr double kStateTol = 1e-9;
inline constexpr double kNormFloor = 1e-12;
inline constexpr double kRelTol = 1e-12;     // strict-inequality guard
inline constexpr double kLambda0Floor = 1e-12;

class TwoQubitState {
public:
    // Validates Hermiticity, unit trace and positivity (each to 1e-9).
    explicit TwoQubitState(const CMat4& rho);

    // For states valid by construction.
    static TwoQubitState trusted(const CMat4& rho) { return TwoQubitState(rho, Trusted{}); }

    const CMat4& rho() const { return rho_; }

private:
    struct Trusted {};
    TwoQubitState(const CMat4& rho, Trusted) : rho_(rho) {}
    CMat4 rho_;
};

struct CorrelationTensors {
    Vec3 r{};    // Bloch vector of the first factor
    Vec3 s{};    // Bloch vector of the second factor
    RMat3 T{};   // T_nm = tr(rho sigma_n (x) sigma_m)
    RMat4 R{};   // R_ij = tr(rho sigma_i (x) sigma_j), i,j = 0..3
};

struct CSpectrum {
    std::array<double, 4> values{};  // descending
    double ratio = 0.0;              // (l1 + l2) / l0, or 0 when degenerate
};

struct Filter {
    CMat2 a = CMat2::identity();
    CMat2 b = CMat2::identity();
};

struct HiddenNonlocality {
    bool violates = false;
    double optimal_violation = 0.0;
};

struct ChshGrid {
    int points_per_angle = 20;
    bool refine = true;
};

CorrelationTensors correlation_tensors(const TwoQubitState& rho);

// Rebuild the density matrix from (r, s, T); inverse of correlation_tensors.
TwoQubitState state_from_tensors(const CorrelationTensors& ct);

// Sum of the two largest eigenvalues of T^t T. CHSH violation iff > 1;
// the optimal violation is 2 sqrt(M).
double horodecki_M(const TwoQubitState& rho);

// Grid search over measurement directions with Nelder-Mead refinement;
// Bob's pair is optimal in closed form given Alice's. Independent oracle
// for 2 sqrt(M).
double chsh_bruteforce(const TwoQubitState& rho, const ChshGrid& grid = {});

// (A (x) B) rho (A (x) B)^dag, normalized. Throws when the normalization
// falls below norm_floor.
TwoQubitState apply_filter(const TwoQubitState& rho, const Filter& f);

// L = T (a (x) a*) T^dag / |det a| with T the Bell-basis change matrix;
// satisfies L^t M L = M for M = diag(1,-1,-1,-1). Throws on singular a.
RMat4 lorentz_of_filter(const CMat2& a);

// Descending eigenvalues of C = M R M R^t, M = diag(1,-1,-1,-1).
CSpectrum c_spectrum(const TwoQubitState& rho);

HiddenNonlocality hidden_nonlocality(const TwoQubitState& rho);

cplx det2(const CMat2& m);

}  // namespace nlb
