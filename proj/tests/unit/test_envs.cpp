#include <algorithm>

#include <gtest/gtest.h>

#include "rmdp/envs.hpp"
#include "rmdp/robust_dp.hpp"

namespace rmdp {
namespace {

std::size_t support(std::span<const double> row) {
    return static_cast<std::size_t>(std::count_if(row.begin(), row.end(), [](double p) { return p > 0; }));
}

TEST(Gamblers, ShapeAndValidity) {
    auto m = gamblers(0.6, 0.9);
    EXPECT_TRUE(validate_mdp(m).empty());
    EXPECT_EQ(m.num_states(), 101u);
    EXPECT_TRUE(m.is_terminal(0));
    EXPECT_TRUE(m.is_terminal(100));
    for (std::size_t s = 1; s < 100; ++s) EXPECT_EQ(m.num_actions(s), std::min(s, 100 - s) + 1);
}

TEST(Gamblers, AllInFromFifty) {
    auto m = gamblers(0.6, 0.9);
    auto row = m.row(50, 50);
    EXPECT_DOUBLE_EQ(row[100], 0.6);
    EXPECT_DOUBLE_EQ(row[0], 0.4);
    EXPECT_EQ(support(row), 2u);
    EXPECT_DOUBLE_EQ(m.reward(50, 50), 0.6);
    EXPECT_EQ(m.action_label(50, 50), "50");
}

TEST(Gamblers, BetZeroIsASelfLoop) {
    auto m = gamblers(0.37, 0.9);
    for (std::size_t s = 1; s < 100; ++s) {
        EXPECT_EQ(m.row(s, 0)[s], 1.0);
        EXPECT_EQ(m.reward(s, 0), 0.0);
    }
}

TEST(Gamblers, NearCertainHeadsWinsInOneStepFromFifty) {
    auto m = gamblers(1.0 - 1e-12, 0.9);
    auto rep = robust_value_iteration(m, AmbiguitySpec::none(), {.tol = 1e-10});
    EXPECT_NEAR(rep.values[50], 1.0, 1e-9);
    for (double v : rep.values) EXPECT_LE(v, 1.0 + 1e-9);
    EXPECT_NEAR(rep.values[25], 0.9, 1e-9);
}

TEST(Gamblers, RejectsDegenerateCoin) {
    EXPECT_THROW(gamblers(0.0, 0.9), std::invalid_argument);
    EXPECT_THROW(gamblers(1.0, 0.9), std::invalid_argument);
}

TEST(FrozenLake, ShapeAndValidity) {
    auto m = frozenlake(0.4, 0.9);
    EXPECT_TRUE(validate_mdp(m).empty());
    EXPECT_EQ(m.num_states(), 64u);
    auto map = parse_frozenlake_map(kFrozenLake8x8);
    EXPECT_EQ(map.start(), 0u);
    EXPECT_EQ(map.goal(), 63u);
    for (std::size_t s = 0; s < 64; ++s) {
        const char tile = map.at(s / 8, s % 8);
        EXPECT_EQ(m.is_terminal(s), tile == 'H' || tile == 'G') << s;
        EXPECT_EQ(m.num_actions(s), 4u);
        for (std::size_t a = 0; a < 4; ++a) EXPECT_LE(support(m.row(s, a)), 3u);
    }
}

TEST(FrozenLake, CornerWallAccumulatesMass) {
    auto m = frozenlake(0.4, 0.9);
    // Left from the top-left corner: intended and "up" both hit walls.
    auto row = m.row(0, 0);
    EXPECT_DOUBLE_EQ(row[0], 0.7);
    EXPECT_DOUBLE_EQ(row[8], 0.3);
    // Right from the top-left corner: intended right, slips up (wall) or down.
    auto right = m.row(0, 2);
    EXPECT_DOUBLE_EQ(right[1], 0.4);
    EXPECT_DOUBLE_EQ(right[0], 0.3);
    EXPECT_DOUBLE_EQ(right[8], 0.3);
}

TEST(FrozenLake, DeterministicWhenIntendedIsOne) {
    auto m = frozenlake(1.0, 0.9);
    for (std::size_t s = 0; s < 64; ++s)
        for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(support(m.row(s, a)), 1u);
    EXPECT_EQ(m.row(9, 1)[17], 1.0);  // down
    EXPECT_EQ(m.row(9, 3)[1], 1.0);   // up
    EXPECT_EQ(m.row(62, 2)[63], 1.0);
    EXPECT_EQ(m.reward(62, 2), 1.0);
    EXPECT_EQ(m.reward(62, 0), 0.0);
}

TEST(FrozenLake, RewardIsGoalEntryProbability) {
    auto m = frozenlake(0.4, 0.9);
    EXPECT_DOUBLE_EQ(m.reward(55, 1), 0.4);  // down into G
    EXPECT_DOUBLE_EQ(m.reward(55, 0), 0.3);  // slip down
    EXPECT_EQ(m.reward(63, 0), 0.0);
}

TEST(FrozenLake, MapParsing) {
    std::string crlf;
    for (char ch : kFrozenLake8x8) crlf += ch == '\n' ? std::string("\r\n") : std::string(1, ch);
    EXPECT_EQ(parse_frozenlake_map(crlf + "\n\n").tiles, parse_frozenlake_map(kFrozenLake8x8).tiles);

    std::string two_starts(kFrozenLake8x8);
    two_starts[1] = 'S';
    EXPECT_THROW(parse_frozenlake_map(two_starts), std::invalid_argument);
    std::string bad_tile(kFrozenLake8x8);
    bad_tile[2] = 'X';
    EXPECT_THROW(parse_frozenlake_map(bad_tile), std::invalid_argument);
    EXPECT_THROW(parse_frozenlake_map("SFFFFFFF\nFFFFFFFG\n"), std::invalid_argument);
    std::string short_row(kFrozenLake8x8);
    short_row.erase(3, 1);
    EXPECT_THROW(parse_frozenlake_map(short_row), std::invalid_argument);
    EXPECT_THROW(frozenlake(0.0, 0.9), std::invalid_argument);
}

TEST(FrozenLake, CustomMapChangesTerminals) {
    const std::string text = "FFFFFFFF\nFFFFFFFF\nFFFFFFFF\nFFFGFFFF\n"
                             "FFFFFFFF\nFFFFFFFF\nFFFFHFFF\nFFFFFFFS\n";
    auto map = parse_frozenlake_map(text);
    EXPECT_EQ(map.start(), 63u);
    EXPECT_EQ(map.goal(), 27u);
    auto m = frozenlake(0.5, 0.9, map);
    EXPECT_TRUE(m.is_terminal(27));
    EXPECT_TRUE(m.is_terminal(52));
    EXPECT_FALSE(m.is_terminal(0));
}

TEST(Chain, MatchesGapNominal) {
    auto m = chain(0.8);
    EXPECT_TRUE(validate_mdp(m).empty());
    EXPECT_EQ(m.num_states(), 2u);
    EXPECT_DOUBLE_EQ(m.reward(0, 1), -80.0 / 99);
}

TEST(Families, NamesAndDefaults) {
    EXPECT_EQ(parse_env_name("frozenlake"), EnvName::FrozenLake);
    EXPECT_EQ(to_string(EnvName::Gamblers), "gamblers");
    EXPECT_THROW(parse_env_name("cartpole"), std::invalid_argument);

    auto g = EnvFamily::gamblers_family();
    EXPECT_EQ(g.nominal(), gamblers(0.6, 0.9));
    EXPECT_EQ(g.start_states().size(), 99u);
    EXPECT_EQ(g.goal_states(), (std::vector<std::size_t>{100}));

    auto f = EnvFamily::frozenlake_family();
    EXPECT_EQ(f.nominal(), frozenlake(0.4, 0.9));
    EXPECT_EQ(f.start_states(), (std::vector<std::size_t>{0}));
    EXPECT_EQ(f.goal_states(), (std::vector<std::size_t>{63}));
    EXPECT_TRUE(EnvFamily::chain_family().goal_states().empty());
}

TEST(Perturb, GamblersRebuildsCoin) {
    auto env = EnvFamily::gamblers_family();
    auto p = perturb(env, "p_h", 0.5);
    EXPECT_EQ(p.rho, 0.0);
    EXPECT_DOUBLE_EQ(p.mdp.row(50, 50)[100], 0.5);
    EXPECT_DOUBLE_EQ(p.mdp.row(10, 3)[13], 0.5);
    EXPECT_THROW(perturb(env, "rho", 0.1), std::invalid_argument);
    EXPECT_THROW(perturb(env, "p_h", 1.5), std::invalid_argument);
}

TEST(Perturb, FrozenLakeUsesTestSlipModel) {
    auto env = EnvFamily::frozenlake_family();
    auto p = perturb(env, "rho", 0.3);
    EXPECT_EQ(p.rho, 0.3);
    EXPECT_EQ(p.mdp, frozenlake(0.2, 0.9));
    EXPECT_EQ(perturb(env, "rho", 0.0).mdp, frozenlake(0.2, 0.9));
    EXPECT_EQ(perturb(env, "p_intended", 0.7).mdp, frozenlake(0.7, 0.9));
    EXPECT_THROW(perturb(env, "rho", 1.2), std::invalid_argument);
    EXPECT_THROW(perturb(env, "p_h", 0.5), std::invalid_argument);
}

TEST(Perturb, ChainGamma) {
    EXPECT_EQ(perturb(EnvFamily::chain_family(), "gamma", 0.5).mdp, chain(0.5));
}

} // namespace
} // namespace rmdp
