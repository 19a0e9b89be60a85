#pragma once

#include <array>
#include <cstdint>

namespace spinmarket {

/// SplitMix64 step; used to expand a 64-bit seed into generator state.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/**
 * xoshiro256** generator.
 *
 * Stream-split rule: replica r of a run seeded with s uses
 * `Rng::stream(s, r)`, i.e. the generator seeded with s advanced by r
 * calls to jump(). Each jump skips 2^128 outputs, so replica streams
 * never overlap. Stream 0 is the plain seeded generator.
 */
class Rng {
public:
    using State = std::array<std::uint64_t, 4>;

    explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

    static Rng stream(std::uint64_t seed, std::uint64_t index) noexcept {
        Rng rng(seed);
        for (std::uint64_t i = 0; i < index; ++i) rng.jump();
        return rng;
    }

    static Rng from_state(const State& s) noexcept {
        Rng rng;
        rng.s_ = s;
        return rng;
    }

    void reseed(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    const State& state() const noexcept { return s_; }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) (Lemire's multiply-shift with rejection).
    std::uint32_t below(std::uint32_t bound) noexcept {
        std::uint64_t x = next() >> 32;
        std::uint64_t m = x * bound;
        auto low = static_cast<std::uint32_t>(m);
        if (low < bound) {
            const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
            while (low < threshold) {
                x = next() >> 32;
                m = x * bound;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    void jump() noexcept {
        constexpr std::array<std::uint64_t, 4> kJump = {
            0x180EC6D33CFD0ABAULL, 0xD5A61266F0C9392CULL,
            0xA9582618E03FC9AAULL, 0x39ABDC4529B1661CULL};
        State acc{};
        for (std::uint64_t word : kJump) {
            for (int b = 0; b < 64; ++b) {
                if (word & (std::uint64_t{1} << b)) {
                    for (int k = 0; k < 4; ++k) acc[k] ^= s_[k];
                }
                next();
            }
        }
        s_ = acc;
    }

    // UniformRandomBitGenerator interface, for use with <random> in tests.
    using result_type = std::uint64_t;
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept { return next(); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    State s_{};
};

}  // namespace spinmarket
