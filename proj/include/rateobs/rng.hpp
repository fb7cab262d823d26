#pragma once

#include <cmath>
#include <cstdint>

namespace rateobs {

/// PCG32 (oneseq variant): 64-bit LCG state, xorshift-rotate output.
/// Small, fast and fully reproducible from the seed, which is what scenario
/// replay needs.
class Pcg32 {
public:
    explicit Pcg32(std::uint64_t seed) {
        state_ = 0u;
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + 1442695040888963407ULL;
        const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    /// 53-bit uniform in [0, 1).
    double uniform01() {
        const std::uint64_t hi = next_u32();
        const std::uint64_t lo = next_u32();
        return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_ = 0;
};

/// Standard-normal draws over Pcg32 via Box-Muller. The state is explicit
/// and owned by the caller; there are no globals.
class NoiseRng {
public:
    explicit NoiseRng(std::uint64_t seed) : rng_(seed) {}

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = rng_.uniform01();
        } while (u1 <= 0.0);
        const double u2 = rng_.uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double uniform01() { return rng_.uniform01(); }

private:
    Pcg32 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace rateobs
