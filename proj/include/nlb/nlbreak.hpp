#pragma once

#include <array>

#include "nlb/channel.hpp"
#include "nlb/kernels.hpp"
#include "nlb/state.hpp"

// Channel classifications: breaking CHSH nonlocality of maximally entangled
// inputs, the pure-input output construction and its grid maximization, and
// strong nonlocality breaking via the hidden-nonlocality condition on the
// Choi state. Also the named one-parameter channel families.

namespace nlb {

struct PureInputSpec {
    double schmidt_lambda = 0.5;           // in [0, 1]
    std::array<double, 3> euler{0, 0, 0};  // Z-Y-Z angles, wrapped to [0, 2pi)

    static PureInputSpec wrapped(double lambda, const std::array<double, 3>& euler);
};

struct PureOutputTensors {
    RMat3 T;  // correlation matrix of (I (x) ch) on the constructed pure state
    Vec3 r;   // Bloch vector of the untouched factor
    Vec3 s;   // Bloch vector of the channel output factor
};

struct SweepResult {
    double best_M = 0.0;
    PureInputSpec best_spec;
    SweepGrid grid;
    std::uint64_t points_evaluated = 0;
    bool refined = false;
};

// M(choi) <= 1; for canonical channels this is the sum of the two largest
// squared scalings.
bool breaks_mes_nonlocality(const QubitChannel& ch);

// Correlation data of the channel output on the pure input described by
// spec (closed form). Throws on non-canonical channels.
PureOutputTensors output_T_matrix(const QubitChannel& ch, const PureInputSpec& spec);

double m_value_of_spec(const QubitChannel& ch, const PureInputSpec& spec);

// The pure two-qubit state realizing spec; feeding it through
// apply_one_sided reproduces output_T_matrix.
TwoQubitState pure_input_state(const PureInputSpec& spec);

// SU(2) element whose Z-Y-Z angles parameterize spec's rotation; used by
// pure_input_state and exposed for cross-checks.
CMat2 su2_of_euler(double alpha, double beta, double gamma);

// Grid maximum of M over Euler angles in [0, 2pi]^3 and the Schmidt
// coefficient in [0, 1], with optional Nelder-Mead polish of the argmax.
SweepResult max_M_over_pure_inputs(const QubitChannel& ch, const SweepGrid& grid = {},
                                   int workers = 0, bool refine = true);

// No hidden CHSH nonlocality in the Choi state.
bool is_strongly_nlb(const QubitChannel& ch);

QubitChannel amplitude_damping(double p);
QubitChannel extremal_channel(double u, double v);
QubitChannel genuine_hidden_family(double q);

// Property check of the composition proposition: a channel that breaks
// MES nonlocality keeps states with maximally mixed free-side reduction
// local. Not a classifier; throws if the preconditions fail.
bool verify_mesbreak_implies_maxmixed_local(const QubitChannel& ch, const TwoQubitState& sigma);

// Marshall-Olkin style bound: for positive definite 3x3 A, B with
// eig(B) <= 1 and lambda1(A) + lambda2(A) <= 1, the two largest
// eigenvalues of AB sum to at most 1.
bool product_eigenvalue_bound(const RMat3& a, const RMat3& b);

// Smallest q in [lo, hi] at which the genuine-hidden family stops breaking
// nonlocality universally (max M over pure inputs crosses 1), located by
// bisection on the refined sweep.
double estimate_qfamily_boundary(double lo = 0.55, double hi = 0.70,
                                 const SweepGrid& grid = {}, int workers = 0);

}  // namespace nlb
