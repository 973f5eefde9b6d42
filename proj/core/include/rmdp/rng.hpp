#pragma once

#include <cstdint>

namespace rmdp {

// SplitMix64. Every stochastic component derives its stream from this
// generator so that results are reproducible bit for bit in any language:
//
//   mix64(z):   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//               z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//               return z ^ (z >> 31)
//   next():     state += 0x9E3779B97F4A7C15; return mix64(state)
//   uniform():  (next() >> 11) * 2^-53, in [0, 1)
//
// All arithmetic is modulo 2^64.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of the sub-stream `index` of `seed`: mix64(seed + kGolden * (index + 1)).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed + kGolden * (index + 1));
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        state_ += kGolden;
        return mix64(state_);
    }

    constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n) by multiply-shift on the top 53 bits.
    /// n must be positive.
    constexpr std::uint64_t below(std::uint64_t n) {
        const auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

    constexpr std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

} // namespace rmdp
