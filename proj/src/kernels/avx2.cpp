#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>

#include "kern_common.hpp"
#include "nlb/kernels.hpp"

// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma;
// it must only be entered after the runtime cpuid check in the dispatcher.

#if defined(__GLIBC__)
#define NLB_HAVE_LIBMVEC 1
extern "C" __m256d _ZGVdN4v_acos(__m256d);
extern "C" __m256d _ZGVdN4v_cos(__m256d);
#endif

namespace nlb {

namespace {

inline __m256d v4(double x) { return _mm256_set1_pd(x); }

inline __m256d cos_third_acos_shifted(__m256d r) {
    // cos(acos(r)/3 + 2 pi / 3), the Cardano angle for the smallest root
#if defined(NLB_HAVE_LIBMVEC)
    const __m256d phi = _mm256_add_pd(
        _mm256_mul_pd(_ZGVdN4v_acos(r), v4(1.0 / 3.0)), v4(2.0943951023931953));
    return _ZGVdN4v_cos(phi);
#else
    alignas(32) double rl[4], cl[4];
    _mm256_store_pd(rl, r);
    for (int k = 0; k < 4; ++k)
        cl[k] = std::cos(std::acos(rl[k]) / 3.0 + 2.0943951023931953);
    return _mm256_load_pd(cl);
#endif
}

// 4-lane smallest eigenvalue of symmetric 3x3 matrices. The trig step runs
// per lane through libm; everything else is vector arithmetic. Matches the
// scalar kern::sym3_min_eig branch-for-branch via blending.
inline __m256d sym3_min_eig4(__m256d u00, __m256d u01, __m256d u02, __m256d u11, __m256d u12,
                             __m256d u22) {
    const __m256d off2 = _mm256_fmadd_pd(
        u01, u01, _mm256_fmadd_pd(u02, u02, _mm256_mul_pd(u12, u12)));
    const __m256d q = _mm256_mul_pd(_mm256_add_pd(_mm256_add_pd(u00, u11), u22),
                                    v4(1.0 / 3.0));
    const __m256d d0 = _mm256_sub_pd(u00, q);
    const __m256d d1 = _mm256_sub_pd(u11, q);
    const __m256d d2 = _mm256_sub_pd(u22, q);
    const __m256d p2 = _mm256_fmadd_pd(
        d0, d0,
        _mm256_fmadd_pd(d1, d1, _mm256_fmadd_pd(d2, d2, _mm256_mul_pd(v4(2.0), off2))));
    const __m256d p = _mm256_sqrt_pd(_mm256_mul_pd(p2, v4(1.0 / 6.0)));
    const __m256d inv = _mm256_div_pd(v4(1.0), _mm256_max_pd(p, v4(1e-300)));

    const __m256d b00 = _mm256_mul_pd(d0, inv);
    const __m256d b11 = _mm256_mul_pd(d1, inv);
    const __m256d b22 = _mm256_mul_pd(d2, inv);
    const __m256d b01 = _mm256_mul_pd(u01, inv);
    const __m256d b02 = _mm256_mul_pd(u02, inv);
    const __m256d b12 = _mm256_mul_pd(u12, inv);

    // det(B)/2
    const __m256d t0 = _mm256_fmsub_pd(b11, b22, _mm256_mul_pd(b12, b12));
    const __m256d t1 = _mm256_fmsub_pd(b01, b22, _mm256_mul_pd(b12, b02));
    const __m256d t2 = _mm256_fmsub_pd(b01, b12, _mm256_mul_pd(b11, b02));
    __m256d r = _mm256_mul_pd(
        v4(0.5), _mm256_add_pd(_mm256_fmsub_pd(b00, t0, _mm256_mul_pd(b01, t1)),
                               _mm256_mul_pd(b02, t2)));
    r = _mm256_max_pd(v4(-1.0), _mm256_min_pd(v4(1.0), r));

    const __m256d cosv = cos_third_acos_shifted(r);

    const __m256d cardano = _mm256_fmadd_pd(_mm256_mul_pd(v4(2.0), p), cosv, q);
    const __m256d diag_min = _mm256_min_pd(u00, _mm256_min_pd(u11, u22));
    const __m256d thresh =
        _mm256_mul_pd(v4(1e-30), _mm256_max_pd(v4(1.0), _mm256_mul_pd(q, q)));
    const __m256d take_diag = _mm256_cmp_pd(off2, thresh, _CMP_LE_OQ);
    return _mm256_blendv_pd(cardano, diag_min, take_diag);
}

SweepBest sweep_slice_avx2(const SweepCtx& ctx, int ia_begin, int ia_end) {
    const int na = static_cast<int>(ctx.ang.size());
    const int nl = static_cast<int>(ctx.lam.size());
    SweepBest best;

    const __m256d t0 = v4(ctx.t[0]), t1 = v4(ctx.t[1]), t2 = v4(ctx.t[2]);

    for (int ia = ia_begin; ia < ia_end; ++ia) {
        const double ca = ctx.cos_a[ia], sa = ctx.sin_a[ia];
        for (int ib = 0; ib < na; ++ib) {
            const double cb = ctx.cos_a[ib], sb = ctx.sin_a[ib];
            for (int ig = 0; ig < na; ++ig) {
                const kern::RSetup s =
                    kern::r_setup(ca, sa, cb, sb, ctx.cos_a[ig], ctx.sin_a[ig], ctx.dc);
                const std::uint64_t base =
                    ((static_cast<std::uint64_t>(ia) * na + ib) * na + ig) * nl;

                const __m256d g00 = v4(s.g00), g01 = v4(s.g01), g02 = v4(s.g02);
                const __m256d g11 = v4(s.g11), g12 = v4(s.g12), g22 = v4(s.g22);
                const __m256d b20 = v4(s.b20), b21 = v4(s.b21), b22v = v4(s.b22);

                for (int il = 0; il < nl; il += 4) {
                    const int lanes = std::min(4, nl - il);
                    alignas(32) double asq[4] = {0, 0, 0, 0}, mc[4] = {0, 0, 0, 0};
                    for (int k = 0; k < lanes; ++k) {
                        asq[k] = ctx.alpha_sq[il + k];
                        mc[k] = ctx.mcoef[il + k];
                    }
                    const __m256d a = _mm256_load_pd(asq);
                    const __m256d m = _mm256_load_pd(mc);

                    const __m256d w0 = _mm256_fmadd_pd(m, t0, b20);
                    const __m256d w1 = _mm256_fmadd_pd(m, t1, b21);
                    const __m256d w2 = _mm256_fmadd_pd(m, t2, b22v);

                    const __m256d u00 = _mm256_fmadd_pd(a, g00, _mm256_mul_pd(w0, w0));
                    const __m256d u01 = _mm256_fmadd_pd(a, g01, _mm256_mul_pd(w0, w1));
                    const __m256d u02 = _mm256_fmadd_pd(a, g02, _mm256_mul_pd(w0, w2));
                    const __m256d u11 = _mm256_fmadd_pd(a, g11, _mm256_mul_pd(w1, w1));
                    const __m256d u12 = _mm256_fmadd_pd(a, g12, _mm256_mul_pd(w1, w2));
                    const __m256d u22 = _mm256_fmadd_pd(a, g22, _mm256_mul_pd(w2, w2));

                    const __m256d tr = _mm256_add_pd(_mm256_add_pd(u00, u11), u22);
                    const __m256d mv =
                        _mm256_sub_pd(tr, sym3_min_eig4(u00, u01, u02, u11, u12, u22));

                    alignas(32) double mvals[4];
                    _mm256_store_pd(mvals, mv);
                    for (int k = 0; k < lanes; ++k) {
                        const std::uint64_t flat = base + il + k;
                        if (mvals[k] > best.m || (mvals[k] == best.m && flat < best.flat)) {
                            best.m = mvals[k];
                            best.flat = flat;
                        }
                    }
                }
            }
        }
    }
    return best;
}

// 4-lane version of kern::choi_etest (no early exits; masks are ANDed).
inline int choi_etest_mask4(__m256d t1, __m256d t2, __m256d t3, __m256d l1, __m256d l2,
                            __m256d l3, double tol) {
    const __m256d quarter = v4(0.25);
    const __m256d one = v4(1.0);
    const __m256d tolv = v4(tol);

    const __m256d d0 = _mm256_fmadd_pd(quarter, _mm256_add_pd(_mm256_add_pd(one, t3), l3), tolv);
    const __m256d d1 = _mm256_fmadd_pd(quarter, _mm256_sub_pd(_mm256_sub_pd(one, t3), l3), tolv);
    const __m256d d2 = _mm256_fmadd_pd(quarter, _mm256_sub_pd(_mm256_add_pd(one, t3), l3), tolv);
    const __m256d d3 = _mm256_fmadd_pd(quarter, _mm256_add_pd(_mm256_sub_pd(one, t3), l3), tolv);

    const __m256d c16 = v4(0.0625);
    const __m256d uu = _mm256_mul_pd(_mm256_fmadd_pd(t1, t1, _mm256_mul_pd(t2, t2)), c16);
    const __m256d re_u2 = _mm256_mul_pd(_mm256_fmsub_pd(t1, t1, _mm256_mul_pd(t2, t2)), c16);
    const __m256d g = _mm256_mul_pd(quarter, _mm256_add_pd(l1, l2));
    const __m256d f = _mm256_mul_pd(quarter, _mm256_sub_pd(l1, l2));

    const __m256d zero = _mm256_setzero_pd();
    __m256d ok = _mm256_and_pd(_mm256_cmp_pd(d0, zero, _CMP_GE_OQ),
                               _mm256_cmp_pd(d1, zero, _CMP_GE_OQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(d2, zero, _CMP_GE_OQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(d3, zero, _CMP_GE_OQ));

    const __m256d gg = _mm256_mul_pd(g, g);
    const __m256d ff = _mm256_mul_pd(f, f);
    __m256d e2 = _mm256_mul_pd(d0, d1);
    e2 = _mm256_fmadd_pd(d0, d2, e2);
    e2 = _mm256_fmadd_pd(d0, d3, e2);
    e2 = _mm256_fmadd_pd(d1, d2, e2);
    e2 = _mm256_fmadd_pd(d1, d3, e2);
    e2 = _mm256_fmadd_pd(d2, d3, e2);
    e2 = _mm256_sub_pd(e2, _mm256_fmadd_pd(v4(2.0), uu, _mm256_add_pd(gg, ff)));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(e2, zero, _CMP_GE_OQ));

    const __m256d d01 = _mm256_mul_pd(d0, d1);
    const __m256d d23 = _mm256_mul_pd(d2, d3);
    const __m256d m012 = _mm256_sub_pd(_mm256_mul_pd(d01, d2),
                                       _mm256_fmadd_pd(d0, ff, _mm256_mul_pd(uu, d2)));
    const __m256d m013 = _mm256_sub_pd(_mm256_mul_pd(d01, d3),
                                       _mm256_fmadd_pd(uu, d3, _mm256_mul_pd(gg, d1)));
    const __m256d m023 = _mm256_sub_pd(_mm256_mul_pd(d0, d23),
                                       _mm256_fmadd_pd(d0, uu, _mm256_mul_pd(gg, d2)));
    const __m256d m123 = _mm256_sub_pd(_mm256_mul_pd(d1, d23),
                                       _mm256_fmadd_pd(d1, uu, _mm256_mul_pd(ff, d3)));
    const __m256d e3 = _mm256_add_pd(_mm256_add_pd(m012, m013), _mm256_add_pd(m023, m123));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(e3, zero, _CMP_GE_OQ));

    __m256d det = _mm256_mul_pd(d0, m123);
    det = _mm256_sub_pd(det, _mm256_mul_pd(uu, _mm256_sub_pd(d23, uu)));
    det = _mm256_sub_pd(det, _mm256_mul_pd(_mm256_mul_pd(v4(2.0), _mm256_mul_pd(f, g)), re_u2));
    det = _mm256_sub_pd(det, _mm256_mul_pd(_mm256_mul_pd(d1, d2), gg));
    det = _mm256_fmadd_pd(ff, gg, det);
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(det, zero, _CMP_GE_OQ));

    return _mm256_movemask_pd(ok);
}

VolCounts volume_range_avx2(const VolCtx& ctx, std::uint64_t begin, std::uint64_t end) {
    const Philox4x32 rng(ctx.seed);
    VolCounts counts;
    Vec3 ts[4], ls[4];
    alignas(32) double a1[4], a2[4], a3[4], b1[4], b2[4], b3[4];

    std::uint64_t i = begin;
    for (; i + 4 <= end; i += 4) {
        for (int k = 0; k < 4; ++k) {
            kern::draw_candidate(rng, i + k, ctx.unital, ts[k], ls[k]);
            a1[k] = ts[k][0]; a2[k] = ts[k][1]; a3[k] = ts[k][2];
            b1[k] = ls[k][0]; b2[k] = ls[k][1]; b3[k] = ls[k][2];
        }
        const int mask = choi_etest_mask4(_mm256_load_pd(a1), _mm256_load_pd(a2),
                                          _mm256_load_pd(a3), _mm256_load_pd(b1),
                                          _mm256_load_pd(b2), _mm256_load_pd(b3), ctx.cp_tol);
        if (mask == 0) continue;
        for (int k = 0; k < 4; ++k) {
            if (!(mask & (1 << k))) continue;
            ++counts.cp;
            const kern::ClassFlags f = kern::classify_accepted(ts[k], ls[k], ctx.cp_tol);
            counts.eb += f.eb;
            counts.nlb_mes += f.nlb_mes;
            counts.snlb += f.snlb;
        }
    }
    for (; i < end; ++i) {
        Vec3 t, lam;
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

const KernelOps& avx2_kernels() {
    static const KernelOps ops{"avx2", &sweep_slice_avx2, &volume_range_avx2};
    return ops;
}

}  // namespace nlb

#endif  // __x86_64__
