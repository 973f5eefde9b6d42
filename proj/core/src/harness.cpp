#include "rmdp/harness.hpp"

#include <algorithm>
#include <stdexcept>

#include "rmdp/generative.hpp"
#include "rmdp/parallel.hpp"
#include "rmdp/robust_dp.hpp"

namespace rmdp {

namespace {

ExperimentRecord make_record(const std::string& experiment, const EnvFamily& env,
                             const AmbiguitySpec& set, std::uint64_t seed, double x,
                             std::string metric, double value) {
    return ExperimentRecord{experiment, std::string(to_string(env.name)),
                            std::string(to_string(set.kind)), set.radius, seed, x,
                            std::move(metric), value};
}

} // namespace

ValueFunction reference_values(const TabularMDP& nominal, const AmbiguitySpec& set,
                               std::size_t workers) {
    SolveOptions options;
    options.tol = kReferenceTolerance;
    options.max_iters = 10000000;
    options.workers = workers;
    return robust_value_iteration(nominal, set, options).values;
}

std::vector<ExperimentRecord> convergence_vs_iterations(const EnvFamily& env,
                                                        const AmbiguitySpec& set,
                                                        std::uint64_t n_samples, std::uint64_t seed,
                                                        std::size_t k_max, std::size_t workers) {
    const TabularMDP nominal = env.nominal();
    const ValueFunction v_star = reference_values(nominal, set, workers);
    const TabularMDP hat = mle_model(nominal, sample_counts(nominal, n_samples, seed, workers));

    std::vector<ExperimentRecord> records;
    records.reserve(k_max);
    ReviOptions options;
    options.workers = workers;
    options.observer = [&](std::size_t k, const QFunction&, const ValueFunction& v) {
        records.push_back(make_record("iters", env, set, seed, static_cast<double>(k), "error_inf",
                                      sup_distance(v, v_star)));
    };
    revi(hat, set, k_max, options);
    return records;
}

std::vector<ExperimentRecord> convergence_vs_samples(const EnvFamily& env, const AmbiguitySpec& set,
                                                     const std::vector<std::uint64_t>& n_grid,
                                                     const std::vector<std::uint64_t>& seeds,
                                                     std::size_t k, std::size_t workers) {
    const TabularMDP nominal = env.nominal();
    const ValueFunction v_star = reference_values(nominal, set, workers);
    const std::size_t cells = n_grid.size() * seeds.size();
    std::vector<double> errors(cells, 0.0);

    parallel_for(cells, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            const std::uint64_t n = n_grid[c / seeds.size()];
            const std::uint64_t seed = seeds[c % seeds.size()];
            const TabularMDP hat = mle_model(nominal, sample_counts(nominal, n, seed));
            errors[c] = sup_distance(revi(hat, set, k).values, v_star);
        }
    });

    std::vector<ExperimentRecord> records;
    records.reserve(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        records.push_back(make_record("samples", env, set, seeds[c % seeds.size()],
                                      static_cast<double>(n_grid[c / seeds.size()]), "error_inf",
                                      errors[c]));
    }
    return records;
}

bool rollout(const TabularMDP& mdp, const Policy& policy, const std::vector<std::size_t>& starts,
             const std::vector<std::size_t>& goals, std::size_t horizon, double rho,
             SplitMix64& rng) {
    if (horizon == 0) throw std::invalid_argument("rollout: horizon must be at least 1");
    if (starts.empty()) throw std::invalid_argument("rollout: no start states");
    auto is_goal = [&](std::size_t s) { return std::find(goals.begin(), goals.end(), s) != goals.end(); };

    std::size_t s = starts[rng.below(starts.size())];
    for (std::size_t t = 0; t < horizon; ++t) {
        if (mdp.is_terminal(s)) return false;
        std::size_t a = policy[s];
        if (rho > 0.0 && rng.uniform() < rho) a = rng.below(mdp.num_actions(s));
        s = sample_index(mdp.row(s, a), rng.uniform());
        if (is_goal(s)) return true;
    }
    return false;
}

std::vector<ExperimentRecord> robustness_eval(const std::vector<LabeledPolicy>& policies,
                                              const EnvFamily& env, const std::string& parameter,
                                              const std::vector<double>& sweep, std::size_t trials,
                                              std::size_t horizon, std::uint64_t seed,
                                              std::size_t workers) {
    if (trials == 0) throw std::invalid_argument("robustness_eval: trials must be at least 1");
    const auto starts = env.start_states();
    const auto goals = env.goal_states();

    std::vector<ExperimentRecord> records;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const PerturbedEnv test = perturb(env, parameter, sweep[i]);
        const std::uint64_t sweep_seed = derive_seed(seed, i);
        for (const auto& lp : policies) {
            check_policy(test.mdp, lp.policy);
            std::vector<char> wins(trials, 0);
            parallel_for(trials, workers, [&](std::size_t begin, std::size_t end) {
                for (std::size_t t = begin; t < end; ++t) {
                    SplitMix64 rng(derive_seed(sweep_seed, t));
                    wins[t] = rollout(test.mdp, lp.policy, starts, goals, horizon, test.rho, rng);
                }
            });
            const auto count = std::count(wins.begin(), wins.end(), 1);
            records.push_back(ExperimentRecord{
                "robustness", std::string(to_string(env.name)), std::string(to_string(lp.set.kind)),
                lp.set.radius, seed, sweep[i], "win_fraction/" + lp.label,
                static_cast<double>(count) / static_cast<double>(trials)});
        }
    }
    return records;
}

std::vector<LabeledPolicy> train_policies(const EnvFamily& env, const AmbiguitySpec& set,
                                          std::uint64_t n_samples, std::uint64_t seed,
                                          std::size_t iterations, std::size_t workers) {
    const TabularMDP nominal = env.nominal();
    const TabularMDP hat = mle_model(nominal, sample_counts(nominal, n_samples, seed, workers));
    ReviOptions options;
    options.workers = workers;
    AmbiguitySpec plain = set;
    plain.radius = 0.0;
    if (plain.kind == SetKind::FiniteSet) plain = AmbiguitySpec::none();
    return {
        {"robust", set, revi(hat, set, iterations, options).policy},
        {"nonrobust", plain, revi(hat, plain, iterations, options).policy},
        {"robust_exact", set, revi(nominal, set, iterations, options).policy},
    };
}

} // namespace rmdp
