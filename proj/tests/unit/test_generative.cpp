#include <algorithm>
#include <cmath>
#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rmdp/envs.hpp"
#include "rmdp/generative.hpp"
#include "rmdp/mdp_io.hpp"
#include "rmdp/report_io.hpp"
#include "support/generators.hpp"

namespace rmdp {
namespace {

using nlohmann::json;

json fixtures() {
    std::ifstream in(std::string(RMDP_FIXTURE_DIR) + "/sampling_fixtures.json");
    return json::parse(in);
}

TabularMDP from_rows(const std::vector<std::vector<std::vector<double>>>& rows) {
    std::vector<std::vector<std::string>> labels(rows.size());
    std::vector<std::vector<double>> rewards(rows.size());
    for (std::size_t s = 0; s < rows.size(); ++s) {
        for (std::size_t a = 0; a < rows[s].size(); ++a) {
            labels[s].push_back("a" + std::to_string(a));
            rewards[s].push_back(0.0);
        }
    }
    return TabularMDP(0.9, labels, rewards, TransitionKernel::from_nested(rows), {});
}

TEST(SplitMix, MatchesReferenceStream) {
    auto doc = fixtures();
    SplitMix64 rng(0);
    for (const auto& expected : doc["splitmix_seed0"]) {
        EXPECT_EQ(rng.next(), std::stoull(expected.get<std::string>()));
    }
    EXPECT_EQ(derive_seed(42, 0), std::stoull(doc["derive_42_0"].get<std::string>()));
    static_assert(mix64(0) == 0);
}

TEST(SplitMix, BelowStaysInRange) {
    SplitMix64 rng(5);
    for (int i = 0; i < 10000; ++i) {
        ASSERT_LT(rng.below(7), 7u);
        ASSERT_EQ(rng.below(1), 0u);
    }
}

TEST(SampleIndex, InverseCdf) {
    const std::vector<double> row{0.2, 0.0, 0.8};
    EXPECT_EQ(sample_index(row, 0.0), 0u);
    EXPECT_EQ(sample_index(row, 0.1999), 0u);
    EXPECT_EQ(sample_index(row, 0.2), 2u);
    EXPECT_EQ(sample_index(row, 0.9999999999999999), 2u);
    // Rows that sum just under one fall back to the last positive entry.
    const std::vector<double> short_row{0.3, 0.3, 0.3999999, 0.0};
    EXPECT_EQ(sample_index(short_row, 0.99999999), 2u);
}

TEST(SampleCounts, GoldenCountsFromIndependentSampler) {
    for (const auto& c : fixtures()["cases"]) {
        auto rows = c["rows"].get<std::vector<std::vector<std::vector<double>>>>();
        auto m = from_rows(rows);
        auto counts = sample_counts(m, c["n"].get<std::uint64_t>(), c["seed"].get<std::uint64_t>());
        EXPECT_EQ(counts.to_nested(), (c["counts"].get<std::vector<std::vector<std::vector<std::uint64_t>>>>()))
            << c["name"];
    }
}

TEST(SampleCounts, PointMassRow) {
    auto counts = sample_counts(chain(0.9), 37, 1);
    EXPECT_EQ(counts.to_nested(),
              (std::vector<std::vector<std::vector<std::uint64_t>>>{{{37, 0}, {0, 37}}, {{37, 0}, {0, 37}}}));
}

TEST(SampleCounts, SingleDrawIsOneHot) {
    testing::Gen gen(2);
    auto m = gen.mdp(6, 3, 0.5, 0.9);
    auto counts = sample_counts(m, 1, 99);
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        for (std::size_t a = 0; a < m.num_actions(s); ++a) {
            auto r = counts.row(s, a);
            EXPECT_EQ(std::count(r.begin(), r.end(), 1u), 1);
            EXPECT_EQ(std::count(r.begin(), r.end(), 0u), static_cast<long>(r.size()) - 1);
            const auto hit = static_cast<std::size_t>(std::find(r.begin(), r.end(), 1u) - r.begin());
            EXPECT_GT(m.row(s, a)[hit], 0.0);
        }
    }
}

TEST(SampleCounts, FairCoinFrequencies) {
    auto m = from_rows({{{0.5, 0.5}}, {{0.5, 0.5}}});
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto hat = mle_model(m, sample_counts(m, 100000, seed));
        for (std::size_t s = 0; s < 2; ++s) {
            EXPECT_NEAR(hat.row(s, 0)[0], 0.5, 0.01);
            EXPECT_NEAR(hat.row(s, 0)[1], 0.5, 0.01);
        }
    }
}

TEST(SampleCounts, WorkerCountDoesNotMatter) {
    auto m = gamblers(0.6, 0.9);
    auto one = sample_counts(m, 200, 17, 1);
    for (std::size_t w : {2u, 3u, 8u}) EXPECT_EQ(sample_counts(m, 200, 17, w), one);
}

TEST(SampleCounts, RejectsZeroSamples) {
    EXPECT_THROW(sample_counts(chain(0.9), 0, 1), std::invalid_argument);
}

TEST(Mle, RowsAreCountsOverN) {
    auto m = from_rows({{{0.5, 0.5}}, {{0.5, 0.5}}});
    TransitionCounts counts(m.layout(), 2, 100, {70, 30, 0, 100});
    auto hat = mle_model(m, counts);
    EXPECT_EQ(hat.row(0, 0)[0], 0.7);
    EXPECT_EQ(hat.row(0, 0)[1], 0.3);
    EXPECT_EQ(hat.row(1, 0)[1], 1.0);
    EXPECT_EQ(hat.gamma(), m.gamma());
    EXPECT_EQ(hat.rewards_nested(), m.rewards_nested());
}

TEST(Mle, ShapeMismatchThrows) {
    TransitionCounts counts(PairLayout({1}), 1, 1, {1});
    EXPECT_THROW(mle_model(chain(0.9), counts), std::invalid_argument);
    EXPECT_THROW(TransitionCounts(PairLayout({1}), 2, 3, {1, 1}), std::invalid_argument);
}

TEST(Mle, EstimateIsAlwaysAValidModel) {
    testing::Gen gen(4);
    for (int i = 0; i < 30; ++i) {
        auto m = gen.mdp(8, 4, 0.5, 0.95);
        const auto n = static_cast<std::uint64_t>(gen.between(1, 500));
        auto hat = mle_model(m, sample_counts(m, n, gen.index(1000)));
        EXPECT_TRUE(validate_mdp(hat).empty());
    }
    auto g = gamblers(0.6, 0.9);
    EXPECT_TRUE(validate_mdp(mle_model(g, sample_counts(g, 3, 5))).empty());
}

TEST(Mle, MedianL1ErrorShrinksWithN) {
    testing::Gen gen(6);
    auto m = gen.mdp(6, 3, 0.5, 0.9);
    double previous = 1e300;
    for (std::uint64_t n : {100u, 1000u, 10000u, 100000u}) {
        std::vector<double> errors;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto hat = mle_model(m, sample_counts(m, n, seed));
            double worst = 0.0;
            for (std::size_t s = 0; s < m.num_states(); ++s) {
                for (std::size_t a = 0; a < m.num_actions(s); ++a) {
                    double l1 = 0.0;
                    for (std::size_t j = 0; j < m.num_states(); ++j)
                        l1 += std::abs(hat.row(s, a)[j] - m.row(s, a)[j]);
                    worst = std::max(worst, l1);
                }
            }
            errors.push_back(worst);
        }
        std::nth_element(errors.begin(), errors.begin() + 10, errors.end());
        EXPECT_LE(errors[10], previous) << "n=" << n;
        previous = errors[10];
    }
}

TEST(CountsJson, RoundTrip) {
    auto m = gamblers(0.6, 0.9);
    auto counts = sample_counts(m, 50, 3);
    auto doc = counts_to_json(counts);
    EXPECT_EQ(doc["n"], 50);
    EXPECT_EQ(counts_from_json(doc, m.layout(), m.num_states()), counts);
}

TEST(CountsJson, RejectsBadRows) {
    auto m = chain(0.9);
    json doc = {{"n", 2}, {"counts", {{{2, 0}, {0, 2}}, {{1, 0}, {0, 2}}}}};
    EXPECT_THROW(counts_from_json(doc, m.layout(), 2), ParseError);
    EXPECT_THROW(counts_from_json(json{{"counts", json::array()}}, m.layout(), 2), ParseError);
}

} // namespace
} // namespace rmdp
