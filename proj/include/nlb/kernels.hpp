#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlb/matrices.hpp"

// Hot inner loops, provided as scalar reference kernels plus an AVX2
// variant selected at runtime (NLB_SIMD=scalar|avx2 overrides). The two
// implementations are equivalence-tested against each other.

namespace nlb {

struct SweepGrid {
    double angle_step = 0.1;    // Euler angles over [0, 2pi]
    double lambda_step = 0.05;  // Schmidt coefficient over [0, 1]
};

// Precomputed grid tables for one channel sweep.
struct SweepCtx {
    Vec3 t{};         // channel translation
    Vec3 dc{};        // Choi correlation diagonal (l1, -l2, l3)
    std::vector<double> ang;     // angle values
    std::vector<double> sin_a;
    std::vector<double> cos_a;
    std::vector<double> lam;     // Schmidt values
    std::vector<double> alpha_sq;  // 4 l (1 - l)
    std::vector<double> mcoef;     // 2 l - 1
};

SweepCtx make_sweep_ctx(const Vec3& t, const Vec3& lambda, const SweepGrid& grid);

struct SweepBest {
    double m = -1.0;
    std::uint64_t flat = 0;  // ((ia*na + ib)*na + ig)*nl + il
};

struct VolCtx {
    std::uint64_t seed = 0;
    bool unital = false;
    double cp_tol = 1e-10;
};

struct VolCounts {
    std::uint64_t cp = 0;
    std::uint64_t eb = 0;
    std::uint64_t nlb_mes = 0;
    std::uint64_t snlb = 0;

    VolCounts& operator+=(const VolCounts& o) {
        cp += o.cp;
        eb += o.eb;
        nlb_mes += o.nlb_mes;
        snlb += o.snlb;
        return *this;
    }
};

struct KernelOps {
    const char* name;
    SweepBest (*sweep_slice)(const SweepCtx&, int ia_begin, int ia_end);
    VolCounts (*volume_range)(const VolCtx&, std::uint64_t begin, std::uint64_t end);
};

const KernelOps& scalar_kernels();
#if defined(__x86_64__)
const KernelOps& avx2_kernels();
bool cpu_has_avx2();
#endif

// Dispatch once per process; honours the NLB_SIMD environment variable.
const KernelOps& active_kernels();
std::string active_kernel_name();

}  // namespace nlb
