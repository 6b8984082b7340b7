#pragma once

#include <cstdint>

namespace fbmatch {

// PCG-XSH-RR 64/32 ("pcg32"), implemented from the published algorithm
// rather than wrapping <random> so that seeded sequences are reproducible
// across languages and standard libraries. Output matches the reference
// pcg32_random_r / pcg32_srandom_r / pcg32_boundedrand_r routines.
class Pcg32 {
  public:
    explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0) {
        state_ = 0;
        inc_ = (stream << 1u) | 1u;
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const auto xorshifted =
            static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    // Unbiased integer in [0, bound) via rejection below the wrap threshold.
    std::uint32_t next_below(std::uint32_t bound) {
        if (bound <= 1) return 0;
        const std::uint32_t threshold = (0u - bound) % bound;
        for (;;) {
            const std::uint32_t r = next_u32();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform in [0, 1) with 32 bits of resolution.
    double next_double() { return next_u32() * 0x1p-32; }

    // Uniform in [lo, hi).
    double next_range(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

  private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 1;
};

}  // namespace fbmatch
