#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rmdp/mdp.hpp"
#include "rmdp/rng.hpp"

namespace rmdp {

/// Next-state counts from n generative draws per admissible (s, a).
class TransitionCounts {
public:
    TransitionCounts() = default;
    TransitionCounts(PairLayout layout, std::size_t num_next, std::uint64_t n,
                     std::vector<std::uint64_t> counts);

    const PairLayout& layout() const { return layout_; }
    std::size_t num_next() const { return num_next_; }
    std::uint64_t n() const { return n_; }

    std::span<const std::uint64_t> row(std::size_t s, std::size_t a) const {
        return {counts_.data() + layout_.pair(s, a) * num_next_, num_next_};
    }

    std::vector<std::vector<std::vector<std::uint64_t>>> to_nested() const;

    bool operator==(const TransitionCounts&) const = default;

private:
    PairLayout layout_;
    std::size_t num_next_ = 0;
    std::uint64_t n_ = 0;
    std::vector<std::uint64_t> counts_;
};

/// Stream seed for pair (s, a): derive_seed(derive_seed(seed, s), a).
constexpr std::uint64_t pair_seed(std::uint64_t seed, std::size_t s, std::size_t a) {
    return derive_seed(derive_seed(seed, s), a);
}

/**
 * Inverse-CDF draw: the first index i with u < row[0] + ... + row[i],
 * accumulating left to right in double precision. Rounding can leave the
 * total just below 1; a u above it maps to the last index with positive
 * mass.
 */
std::size_t sample_index(std::span<const double> row, double u);

/**
 * Draws n next states for every admissible (s, a) from the nominal kernel.
 * Pair (s, a) uses its own SplitMix64 stream seeded with pair_seed(seed, s, a)
 * and consumes exactly n uniforms, so the result does not depend on
 * `workers`. Throws std::invalid_argument when n == 0.
 */
TransitionCounts sample_counts(const TabularMDP& mdp, std::uint64_t n, std::uint64_t seed,
                               std::size_t workers = 1);

/// Copy of mdp with kernel rows counts / n. Throws std::invalid_argument on a shape mismatch.
TabularMDP mle_model(const TabularMDP& mdp, const TransitionCounts& counts);

} // namespace rmdp
