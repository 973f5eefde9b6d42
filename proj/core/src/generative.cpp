#include "rmdp/generative.hpp"

#include <stdexcept>
#include <string>

#include "rmdp/parallel.hpp"

namespace rmdp {

TransitionCounts::TransitionCounts(PairLayout layout, std::size_t num_next, std::uint64_t n,
                                   std::vector<std::uint64_t> counts)
    : layout_(std::move(layout)), num_next_(num_next), n_(n), counts_(std::move(counts)) {
    if (counts_.size() != layout_.num_pairs() * num_next_) {
        throw std::invalid_argument("TransitionCounts: count array does not match the layout");
    }
    for (std::size_t p = 0; p < layout_.num_pairs(); ++p) {
        std::uint64_t total = 0;
        for (std::size_t j = 0; j < num_next_; ++j) total += counts_[p * num_next_ + j];
        if (total != n_) {
            throw std::invalid_argument("TransitionCounts: pair " + std::to_string(p) + " has " +
                                        std::to_string(total) + " samples, expected " +
                                        std::to_string(n_));
        }
    }
}

std::vector<std::vector<std::vector<std::uint64_t>>> TransitionCounts::to_nested() const {
    std::vector<std::vector<std::vector<std::uint64_t>>> out(layout_.num_states());
    for (std::size_t s = 0; s < layout_.num_states(); ++s) {
        for (std::size_t a = 0; a < layout_.num_actions(s); ++a) {
            auto r = row(s, a);
            out[s].emplace_back(r.begin(), r.end());
        }
    }
    return out;
}

std::size_t sample_index(std::span<const double> row, double u) {
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] <= 0.0) continue;
        cumulative += row[i];
        last_positive = i;
        if (u < cumulative) return i;
    }
    return last_positive;
}

TransitionCounts sample_counts(const TabularMDP& mdp, std::uint64_t n, std::uint64_t seed,
                               std::size_t workers) {
    if (n == 0) throw std::invalid_argument("sample_counts: n must be at least 1");
    const PairLayout& layout = mdp.layout();
    const std::size_t width = mdp.kernel().num_next();
    std::vector<std::uint64_t> counts(layout.num_pairs() * width, 0);

    parallel_for(mdp.num_states(), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            for (std::size_t a = 0; a < layout.num_actions(s); ++a) {
                SplitMix64 rng(pair_seed(seed, s, a));
                auto row = mdp.row(s, a);
                std::uint64_t* out = counts.data() + layout.pair(s, a) * width;
                for (std::uint64_t i = 0; i < n; ++i) ++out[sample_index(row, rng.uniform())];
            }
        }
    });
    return TransitionCounts(layout, width, n, std::move(counts));
}

TabularMDP mle_model(const TabularMDP& mdp, const TransitionCounts& counts) {
    if (counts.layout() != mdp.layout() || counts.num_next() != mdp.kernel().num_next()) {
        throw std::invalid_argument("mle_model: counts are not shaped for this model");
    }
    const PairLayout& layout = mdp.layout();
    const std::size_t width = counts.num_next();
    const double n = static_cast<double>(counts.n());
    std::vector<double> rows(layout.num_pairs() * width, 0.0);
    for (std::size_t s = 0; s < layout.num_states(); ++s) {
        for (std::size_t a = 0; a < layout.num_actions(s); ++a) {
            auto c = counts.row(s, a);
            double* out = rows.data() + layout.pair(s, a) * width;
            for (std::size_t j = 0; j < width; ++j) out[j] = static_cast<double>(c[j]) / n;
        }
    }
    return mdp.with_kernel(TransitionKernel(layout, width, std::move(rows)));
}

} // namespace rmdp
