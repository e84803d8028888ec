#include <cmath>
#include <cstdlib>
#include <string>

#include "nlb/kernels.hpp"

namespace nlb {

#if defined(__x86_64__)
bool cpu_has_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

SweepCtx make_sweep_ctx(const Vec3& t, const Vec3& lambda, const SweepGrid& grid) {
    if (grid.angle_step <= 0.0 || grid.lambda_step <= 0.0)
        throw std::invalid_argument("sweep grid steps must be positive");
    SweepCtx ctx;
    ctx.t = t;
    ctx.dc = {lambda[0], -lambda[1], lambda[2]};

    const double two_pi = 2.0 * M_PI;
    const int ka = static_cast<int>(std::floor(two_pi / grid.angle_step + 1e-9));
    for (int k = 0; k <= ka; ++k) ctx.ang.push_back(k * grid.angle_step);
    if (ctx.ang.back() < two_pi - 1e-12) ctx.ang.push_back(two_pi);
    for (double a : ctx.ang) {
        ctx.sin_a.push_back(std::sin(a));
        ctx.cos_a.push_back(std::cos(a));
    }

    const int kl = static_cast<int>(std::floor(1.0 / grid.lambda_step + 1e-9));
    for (int k = 0; k <= kl; ++k) ctx.lam.push_back(std::min(1.0, k * grid.lambda_step));
    if (ctx.lam.back() < 1.0 - 1e-12) ctx.lam.push_back(1.0);
    for (double l : ctx.lam) {
        ctx.alpha_sq.push_back(4.0 * l * (1.0 - l));
        ctx.mcoef.push_back(2.0 * l - 1.0);
    }
    return ctx;
}

const KernelOps& active_kernels() {
    static const KernelOps* chosen = [] {
        const char* env = std::getenv("NLB_SIMD");
        const std::string want = env ? env : "";
#if defined(__x86_64__)
        if (want == "scalar") return &scalar_kernels();
        if (want == "avx2") {
            if (cpu_has_avx2()) return &avx2_kernels();
            return &scalar_kernels();
        }
        if (cpu_has_avx2()) return &avx2_kernels();
#endif
        return &scalar_kernels();
    }();
    return *chosen;
}

std::string active_kernel_name() { return active_kernels().name; }

}  // namespace nlb
