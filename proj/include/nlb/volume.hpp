#pragma once

#include <cstdint>
#include <optional>

#include "nlb/kernels.hpp"
#include "nlb/matrices.hpp"

// Seeded Monte Carlo estimation of the relative volumes of entanglement
// breaking, MES-nonlocality-breaking and strongly nonlocality breaking
// channels inside the completely positive region of the parameter cube.

namespace nlb {

enum class VolumeMode { full, unital };

struct VolumeReport {
    std::uint64_t seed = 0;
    std::uint64_t samples_drawn = 0;
    std::uint64_t cp_accepted = 0;
    std::uint64_t eb_count = 0;
    std::uint64_t nlb_mes_count = 0;
    std::uint64_t snlb_count = 0;
    VolumeMode mode = VolumeMode::full;
    int workers = 1;

    // Fractions relative to cp_accepted; empty when nothing was accepted.
    std::optional<double> eb_fraction() const { return frac(eb_count); }
    std::optional<double> nlb_mes_fraction() const { return frac(nlb_mes_count); }
    std::optional<double> snlb_fraction() const { return frac(snlb_count); }

    double standard_error(double fraction) const;

private:
    std::optional<double> frac(std::uint64_t c) const {
        if (cp_accepted == 0) return std::nullopt;
        return static_cast<double>(c) / static_cast<double>(cp_accepted);
    }
};

// The candidate drawn for a given sample index: uniform in [-1, 1]^6
// (unital mode draws only lambda and zeroes t).
void sample_candidate(std::uint64_t seed, std::uint64_t index, VolumeMode mode, Vec3& t,
                      Vec3& lambda);

// Classify n candidates. Deterministic in (n, seed); the counter-based
// generator additionally makes the result independent of the worker count.
VolumeReport estimate_volumes(std::uint64_t n, std::uint64_t seed,
                              VolumeMode mode = VolumeMode::full, int workers = 0);

}  // namespace nlb
