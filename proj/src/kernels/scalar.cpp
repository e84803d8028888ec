#include "kern_common.hpp"
#include "nlb/kernels.hpp"

namespace nlb {

namespace {

SweepBest sweep_slice_scalar(const SweepCtx& ctx, int ia_begin, int ia_end) {
    const int na = static_cast<int>(ctx.ang.size());
    const int nl = static_cast<int>(ctx.lam.size());
    SweepBest best;
    for (int ia = ia_begin; ia < ia_end; ++ia) {
        const double ca = ctx.cos_a[ia], sa = ctx.sin_a[ia];
        for (int ib = 0; ib < na; ++ib) {
            const double cb = ctx.cos_a[ib], sb = ctx.sin_a[ib];
            for (int ig = 0; ig < na; ++ig) {
                const kern::RSetup s =
                    kern::r_setup(ca, sa, cb, sb, ctx.cos_a[ig], ctx.sin_a[ig], ctx.dc);
                const std::uint64_t base =
                    ((static_cast<std::uint64_t>(ia) * na + ib) * na + ig) * nl;
                for (int il = 0; il < nl; ++il) {
                    const double m = kern::sweep_point_m(s, ctx.t, ctx.alpha_sq[il], ctx.mcoef[il]);
                    if (m > best.m || (m == best.m && base + il < best.flat)) {
                        best.m = m;
                        best.flat = base + il;
                    }
                }
            }
        }
    }
    return best;
}

VolCounts volume_range_scalar(const VolCtx& ctx, std::uint64_t begin, std::uint64_t end) {
    const Philox4x32 rng(ctx.seed);
    VolCounts counts;
    Vec3 t, lam;
    for (std::uint64_t i = begin; i < end; ++i) {
        kern::draw_candidate(rng, i, ctx.unital, t, lam);
        if (!kern::choi_etest(t[0], t[1], t[2], lam[0], lam[1], lam[2], ctx.cp_tol)) continue;
        ++counts.cp;
        const kern::ClassFlags f = kern::classify_accepted(t, lam, ctx.cp_tol);
        counts.eb += f.eb;
        counts.nlb_mes += f.nlb_mes;
        counts.snlb += f.snlb;
    }
    return counts;
}

}  // namespace

const KernelOps& scalar_kernels() {
    static const KernelOps ops{"scalar", &sweep_slice_scalar, &volume_range_scalar};
    return ops;
}

}  // namespace nlb
