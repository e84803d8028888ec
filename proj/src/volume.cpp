#include "nlb/volume.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "kernels/kern_common.hpp"

namespace nlb {

double VolumeReport::standard_error(double fraction) const {
    if (cp_accepted == 0) return 0.0;
    return std::sqrt(fraction * (1.0 - fraction) / static_cast<double>(cp_accepted));
}

void sample_candidate(std::uint64_t seed, std::uint64_t index, VolumeMode mode, Vec3& t,
                      Vec3& lambda) {
    const Philox4x32 rng(seed);
    kern::draw_candidate(rng, index, mode == VolumeMode::unital, t, lambda);
}

VolumeReport estimate_volumes(std::uint64_t n, std::uint64_t seed, VolumeMode mode, int workers) {
    if (n < 1) throw std::invalid_argument("sample count must be at least 1");
    int nthreads = workers;
    if (nthreads <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        nthreads = hc == 0 ? 1 : static_cast<int>(hc);
    }
    nthreads = static_cast<int>(std::min<std::uint64_t>(nthreads, n));

    const VolCtx ctx{seed, mode == VolumeMode::unital, 1e-10};
    const auto& ops = active_kernels();

    std::vector<VolCounts> partial(nthreads);
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (int w = 0; w < nthreads; ++w) {
        const std::uint64_t b = n * static_cast<std::uint64_t>(w) / nthreads;
        const std::uint64_t e = n * static_cast<std::uint64_t>(w + 1) / nthreads;
        threads.emplace_back([&, w, b, e] { partial[w] = ops.volume_range(ctx, b, e); });
    }
    for (auto& th : threads) th.join();

    VolCounts total;
    for (const VolCounts& p : partial) total += p;

    VolumeReport report;
    report.seed = seed;
    report.samples_drawn = n;
    report.cp_accepted = total.cp;
    report.eb_count = total.eb;
    report.nlb_mes_count = total.nlb_mes;
    report.snlb_count = total.snlb;
    report.mode = mode;
    report.workers = nthreads;

    // EB <= SNLB <= NLB-MES <= CP must hold sample by sample.
    if (report.eb_count > report.snlb_count || report.snlb_count > report.nlb_mes_count ||
        report.nlb_mes_count > report.cp_accepted)
        throw std::logic_error("volume classification broke the subset chain");
    return report;
}

}  // namespace nlb
