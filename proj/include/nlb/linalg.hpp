#pragma once

#include <array>
#include <stdexcept>

#include "nlb/matrices.hpp"

// Dense kernels shared by every module: Hermitian and real-symmetric
// eigendecompositions (cyclic Jacobi), general real 4x4 eigenvalues
// (Hessenberg + Francis QR), singular values, Kronecker products and the
// partial operations on a 2 (x) 2 system.

namespace nlb {

inline constexpr double kHermTol = 1e-9;   // max-norm of m - m^dagger
inline constexpr double kImagTol = 1e-8;   // reality check on C-spectra

template <int N>
struct HermEigResult {
    std::array<double, N> values;  // descending
    CMat<N> vectors;               // columns, orthonormal
};

template <int N>
struct SymEigResult {
    std::array<double, N> values;  // descending
    RMat<N> vectors;               // columns, orthonormal
};

// Throws std::invalid_argument if m deviates from Hermitian by more than tol.
HermEigResult<2> eig_hermitian(const CMat2& m, double tol = kHermTol);
HermEigResult<4> eig_hermitian(const CMat4& m, double tol = kHermTol);

double min_eig_hermitian(const CMat4& m, double tol = kHermTol);

SymEigResult<3> eig_symmetric(const RMat3& m);
SymEigResult<4> eig_symmetric(const RMat4& m);

// Eigenvalues of a general real 4x4 matrix, unordered, possibly complex.
std::array<cplx, 4> eig_general_real(const RMat4& m);

// Real parts sorted descending; throws std::domain_error if any imaginary
// part exceeds imag_tol.
std::array<double, 4> real_eigs_descending(const std::array<cplx, 4>& eigs,
                                           double imag_tol = kImagTol);

// Singular values of a real 3x3 matrix, descending.
std::array<double, 3> singular_values(const RMat3& m);

CMat4 kron(const CMat2& a, const CMat2& b);

// Transpose on the second tensor factor.
CMat4 partial_transpose_second(const CMat4& rho);

CMat2 partial_trace_first(const CMat4& rho);   // trace out factor 1
CMat2 partial_trace_second(const CMat4& rho);  // trace out factor 2

}  // namespace nlb
