#pragma once

#include <array>
#include <cstdint>

// Philox4x32-10 counter-based generator (Salmon et al., Random123).
// Block i is a pure function of (seed, i), so parallel workers can consume
// disjoint index ranges and the merged result never depends on scheduling.

namespace nlb {

class Philox4x32 {
public:
    explicit Philox4x32(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    // The 4 x 32-bit output block for a 64-bit counter (high words zero).
    std::array<std::uint32_t, 4> block(std::uint64_t index) const {
        std::array<std::uint32_t, 4> x{static_cast<std::uint32_t>(index),
                                       static_cast<std::uint32_t>(index >> 32), 0u, 0u};
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int r = 0; r < 10; ++r) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(x[0]) * kM0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(x[2]) * kM1;
            x = {static_cast<std::uint32_t>(p1 >> 32) ^ x[1] ^ k0,
                 static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ k1,
                 static_cast<std::uint32_t>(p0)};
            k0 += kW0;
            k1 += kW1;
        }
        return x;
    }

    // Two doubles in [0, 1) from one block (53-bit mantissas).
    std::array<double, 2> uniform2(std::uint64_t index) const {
        const auto b = block(index);
        const std::uint64_t u0 = (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
        const std::uint64_t u1 = (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
        constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
        return {static_cast<double>(u0 >> 11) * scale, static_cast<double>(u1 >> 11) * scale};
    }

    std::uint64_t seed_key() const {
        return (static_cast<std::uint64_t>(key_[1]) << 32) | key_[0];
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    std::array<std::uint32_t, 2> key_;
};

// Small sequential helper on top of the counter interface, for property
// tests and one-off draws.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t start_block = 0)
        : gen_(seed), next_(start_block) {}

    double uniform01() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        const auto u = gen_.uniform2(next_++);
        spare_ = u[1];
        have_ = true;
        return u[0];
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    Philox4x32 gen_;
    std::uint64_t next_;
    double spare_ = 0.0;
    bool have_ = false;
};

}  // namespace nlb
