/* rng.hpp -- splitmix64, the toolkit's only randomness source. */
#pragma once

#include <cstdint>

namespace aag {

// Deterministic 64-bit generator. Every randomized artifact (private keys,
// sampled words, fuzz inputs) derives from a seed through this sequence, so
// fixed seeds reproduce byte-identical results everywhere.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Unbiased draw from [0, bound) via rejection.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t v = next();
            if (v >= threshold) return v % bound;
        }
    }

private:
    std::uint64_t state_;
};

} // namespace aag
