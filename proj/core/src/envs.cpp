#include "rmdp/envs.hpp"

#include <algorithm>
#include <stdexcept>

#include "rmdp/bounds.hpp"

namespace rmdp {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

double param(const EnvParams& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument("missing environment parameter " + key);
    return it->second;
}

// L, D, R, U as (row, col) offsets.
constexpr int kDr[4] = {0, 1, 0, -1};
constexpr int kDc[4] = {-1, 0, 1, 0};

} // namespace

TabularMDP gamblers(double p_h, double gamma) {
    require(p_h > 0.0 && p_h < 1.0, "gamblers: p_h must lie in (0,1)");
    require(gamma > 0.0 && gamma < 1.0, "gamblers: gamma must lie in (0,1)");
    constexpr std::size_t n = kGamblersGoal + 1;

    std::vector<std::vector<std::string>> labels(n);
    std::vector<std::vector<double>> rewards(n);
    std::vector<std::vector<std::vector<double>>> rows(n);
    for (std::size_t s = 0; s < n; ++s) {
        const bool terminal = s == 0 || s == kGamblersGoal;
        const std::size_t max_bet = terminal ? 0 : std::min(s, kGamblersGoal - s);
        for (std::size_t b = 0; b <= max_bet; ++b) {
            std::vector<double> row(n, 0.0);
            row[s + b] += p_h;
            row[s - b] += 1.0 - p_h;
            labels[s].push_back(std::to_string(b));
            rewards[s].push_back(b > 0 && s + b == kGamblersGoal ? p_h : 0.0);
            rows[s].push_back(std::move(row));
        }
    }
    // A bet of 0 gives p_h + (1 - p_h) on s, which need not round to 1.
    for (std::size_t s = 0; s < n; ++s) rows[s][0][s] = 1.0;
    return TabularMDP(gamma, std::move(labels), std::move(rewards),
                      TransitionKernel::from_nested(rows), {0, kGamblersGoal}, 1.0);
}

std::size_t GridMap::start() const {
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (at(r, c) == 'S') return index(r, c);
    throw std::invalid_argument("map has no start tile");
}

std::size_t GridMap::goal() const {
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (at(r, c) == 'G') return index(r, c);
    throw std::invalid_argument("map has no goal tile");
}

GridMap parse_frozenlake_map(std::string_view text) {
    GridMap map;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(pos, end - pos));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        map.tiles.push_back(std::move(line));
        pos = end + 1;
    }
    while (!map.tiles.empty() && map.tiles.back().empty()) map.tiles.pop_back();

    require(map.tiles.size() == 8, "map must have 8 rows, found " + std::to_string(map.tiles.size()));
    std::size_t starts = 0;
    std::size_t goals = 0;
    for (std::size_t r = 0; r < map.tiles.size(); ++r) {
        const auto& line = map.tiles[r];
        require(line.size() == 8, "map row " + std::to_string(r + 1) + " must have 8 tiles");
        for (char ch : line) {
            require(ch == 'S' || ch == 'F' || ch == 'H' || ch == 'G',
                    std::string("map row ") + std::to_string(r + 1) + ": unknown tile '" + ch + "'");
            starts += ch == 'S';
            goals += ch == 'G';
        }
    }
    require(starts == 1, "map must have exactly one start tile");
    require(goals == 1, "map must have exactly one goal tile");
    map.rows = 8;
    map.cols = 8;
    return map;
}

TabularMDP frozenlake(double p_intended, double gamma, const GridMap& map) {
    require(p_intended > 0.0 && p_intended <= 1.0, "frozenlake: p_intended must lie in (0,1]");
    require(gamma > 0.0 && gamma < 1.0, "frozenlake: gamma must lie in (0,1)");
    require(map.rows > 0 && map.cols > 0, "frozenlake: empty map");
    const std::size_t n = map.rows * map.cols;
    const std::size_t goal = map.goal();
    const double slip = (1.0 - p_intended) / 2.0;
    static const std::vector<std::string> kLabels{"L", "D", "R", "U"};

    auto step = [&](std::size_t r, std::size_t c, int dir) {
        const long nr = static_cast<long>(r) + kDr[dir];
        const long nc = static_cast<long>(c) + kDc[dir];
        if (nr < 0 || nc < 0 || nr >= static_cast<long>(map.rows) || nc >= static_cast<long>(map.cols)) {
            return map.index(r, c);
        }
        return map.index(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc));
    };

    std::vector<std::vector<std::string>> labels(n, kLabels);
    std::vector<std::vector<double>> rewards(n, std::vector<double>(4, 0.0));
    std::vector<std::vector<std::vector<double>>> rows(n);
    std::vector<std::size_t> terminal;
    for (std::size_t r = 0; r < map.rows; ++r) {
        for (std::size_t c = 0; c < map.cols; ++c) {
            const std::size_t s = map.index(r, c);
            const char tile = map.at(r, c);
            if (tile == 'H' || tile == 'G') {
                terminal.push_back(s);
                std::vector<double> loop(n, 0.0);
                loop[s] = 1.0;
                rows[s].assign(4, loop);
                continue;
            }
            for (int a = 0; a < 4; ++a) {
                std::vector<double> row(n, 0.0);
                row[step(r, c, a)] += p_intended;
                if (slip > 0.0) {
                    row[step(r, c, (a + 1) % 4)] += slip;
                    row[step(r, c, (a + 3) % 4)] += slip;
                }
                rewards[s][static_cast<std::size_t>(a)] = row[goal];
                rows[s].push_back(std::move(row));
            }
        }
    }
    return TabularMDP(gamma, std::move(labels), std::move(rewards),
                      TransitionKernel::from_nested(rows), std::move(terminal), 1.0);
}

TabularMDP frozenlake(double p_intended, double gamma) {
    return frozenlake(p_intended, gamma, parse_frozenlake_map(kFrozenLake8x8));
}

TabularMDP chain(double gamma) { return gap_instance(gamma).nominal; }

std::string_view to_string(EnvName name) {
    switch (name) {
    case EnvName::Gamblers: return "gamblers";
    case EnvName::FrozenLake: return "frozenlake";
    case EnvName::Chain: return "chain";
    }
    return "?";
}

EnvName parse_env_name(std::string_view text) {
    if (text == "gamblers") return EnvName::Gamblers;
    if (text == "frozenlake") return EnvName::FrozenLake;
    if (text == "chain") return EnvName::Chain;
    throw std::invalid_argument("unknown environment \"" + std::string(text) + "\"");
}

EnvFamily EnvFamily::gamblers_family(double gamma, double p_h) {
    EnvFamily env;
    env.name = EnvName::Gamblers;
    env.nominal_params = {{"p_h", p_h}, {"gamma", gamma}};
    env.test_params = env.nominal_params;
    return env;
}

EnvFamily EnvFamily::frozenlake_family(double gamma, double p_intended, double test_p_intended,
                                       GridMap map) {
    EnvFamily env;
    env.name = EnvName::FrozenLake;
    env.nominal_params = {{"p_intended", p_intended}, {"rho", 0.0}, {"gamma", gamma}};
    env.test_params = {{"p_intended", test_p_intended}, {"rho", 0.0}, {"gamma", gamma}};
    env.map = map.rows == 0 ? parse_frozenlake_map(kFrozenLake8x8) : std::move(map);
    return env;
}

EnvFamily EnvFamily::chain_family(double gamma) {
    EnvFamily env;
    env.name = EnvName::Chain;
    env.nominal_params = {{"gamma", gamma}};
    env.test_params = env.nominal_params;
    return env;
}

TabularMDP EnvFamily::nominal() const {
    const double gamma = param(nominal_params, "gamma");
    switch (name) {
    case EnvName::Gamblers: return gamblers(param(nominal_params, "p_h"), gamma);
    case EnvName::FrozenLake: return frozenlake(param(nominal_params, "p_intended"), gamma, map);
    case EnvName::Chain: return chain(gamma);
    }
    throw std::logic_error("unreachable");
}

std::vector<std::size_t> EnvFamily::start_states() const {
    switch (name) {
    case EnvName::Gamblers: {
        std::vector<std::size_t> out;
        for (std::size_t s = 1; s < kGamblersGoal; ++s) out.push_back(s);
        return out;
    }
    case EnvName::FrozenLake: return {map.start()};
    case EnvName::Chain: return {0};
    }
    throw std::logic_error("unreachable");
}

std::vector<std::size_t> EnvFamily::goal_states() const {
    switch (name) {
    case EnvName::Gamblers: return {kGamblersGoal};
    case EnvName::FrozenLake: return {map.goal()};
    case EnvName::Chain: return {};
    }
    throw std::logic_error("unreachable");
}

PerturbedEnv perturb(const EnvFamily& env, std::string_view which, double value) {
    const double gamma = param(env.test_params, "gamma");
    const std::string key(which);
    switch (env.name) {
    case EnvName::Gamblers:
        if (key == "p_h") return {gamblers(value, gamma), 0.0};
        break;
    case EnvName::FrozenLake:
        if (key == "rho") {
            require(value >= 0.0 && value <= 1.0, "rho must lie in [0,1]");
            return {frozenlake(param(env.test_params, "p_intended"), gamma, env.map), value};
        }
        if (key == "p_intended") return {frozenlake(value, gamma, env.map), 0.0};
        break;
    case EnvName::Chain:
        if (key == "gamma") return {chain(value), 0.0};
        break;
    }
    throw std::invalid_argument("unknown parameter \"" + key + "\" for " +
                                std::string(to_string(env.name)));
}

} // namespace rmdp
