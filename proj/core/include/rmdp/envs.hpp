#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rmdp/mdp.hpp"

namespace rmdp {

inline constexpr std::size_t kGamblersGoal = 100;

/**
 * Gambler's problem: capital 0..100, 0 and 100 terminal. In state s the
 * bets are 0..min(s, 100 - s) (label = stake); heads (p_h) moves to s + b,
 * tails to s - b. The reward for winning is folded into its expectation,
 * r(s, b) = p_h [s + b == 100]. Terminal states keep a single "0" self-loop.
 * Throws std::invalid_argument unless p_h lies in (0,1) and gamma in (0,1).
 */
TabularMDP gamblers(double p_h, double gamma);

/// The widely used 8x8 layout, rows top to bottom.
inline constexpr std::string_view kFrozenLake8x8 =
    "SFFFFFFF\n"
    "FFFFFFFF\n"
    "FFFHFFFF\n"
    "FFFFFHFF\n"
    "FFFHFFFF\n"
    "FHHFFFHF\n"
    "FHFFHFHF\n"
    "FFFHFFFG\n";

struct GridMap {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::string> tiles;  // one string per row

    char at(std::size_t r, std::size_t c) const { return tiles[r][c]; }
    std::size_t index(std::size_t r, std::size_t c) const { return r * cols + c; }
    std::size_t start() const;
    std::size_t goal() const;
};

/// Parses 8 lines of 8 characters from {S,F,H,G} with exactly one S and one G.
/// Blank trailing lines and '\r' are ignored. Throws std::invalid_argument.
GridMap parse_frozenlake_map(std::string_view text);

/**
 * FrozenLake on `map`: state r * 8 + c, actions L, D, R, U. The intended
 * move happens with p_intended, each perpendicular move with
 * (1 - p_intended) / 2; a move into a wall stays put. Holes and the goal are
 * terminal with four self-loops. r(s, a) is the probability of entering the
 * goal from s under a.
 */
TabularMDP frozenlake(double p_intended, double gamma, const GridMap& map);
TabularMDP frozenlake(double p_intended, double gamma);

/// Nominal model of the two-state gap instance.
TabularMDP chain(double gamma);

enum class EnvName { Gamblers, FrozenLake, Chain };

std::string_view to_string(EnvName name);
/// "gamblers", "frozenlake" or "chain"; throws std::invalid_argument otherwise.
EnvName parse_env_name(std::string_view text);

using EnvParams = std::map<std::string, double>;

/**
 * An environment with its nominal and test settings.
 *   gamblers:   p_h (nominal 0.6), gamma
 *   frozenlake: p_intended (nominal 0.4, test 0.2), rho (nominal 0), gamma
 *   chain:      gamma
 */
struct EnvFamily {
    EnvName name = EnvName::Gamblers;
    EnvParams nominal_params;
    EnvParams test_params;
    GridMap map;  // frozenlake only

    static EnvFamily gamblers_family(double gamma = 0.9, double p_h = 0.6);
    static EnvFamily frozenlake_family(double gamma = 0.9, double p_intended = 0.4,
                                       double test_p_intended = 0.2, GridMap map = {});
    static EnvFamily chain_family(double gamma = 0.9);

    TabularMDP nominal() const;
    /// Start state distribution for rollouts (uniform over the listed states).
    std::vector<std::size_t> start_states() const;
    /// Terminal states that count as a win.
    std::vector<std::size_t> goal_states() const;
};

/// A test environment: the model plus a random-action probability applied by rollouts.
struct PerturbedEnv {
    TabularMDP mdp;
    double rho = 0.0;
};

/**
 * gamblers: `which` = "p_h" rebuilds with the new head probability.
 * frozenlake: `which` = "rho" uses the test p_intended with random-action
 * probability `value`; `which` = "p_intended" changes the slip model with rho 0.
 * chain: `which` = "gamma".
 * Throws std::invalid_argument for an unknown parameter or out-of-range value.
 */
PerturbedEnv perturb(const EnvFamily& env, std::string_view which, double value);

} // namespace rmdp
