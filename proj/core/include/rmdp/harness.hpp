#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmdp/envs.hpp"
#include "rmdp/mdp.hpp"
#include "rmdp/rng.hpp"

namespace rmdp {

struct ExperimentRecord {
    std::string experiment;
    std::string family;
    std::string set_kind;
    double radius = 0.0;
    std::uint64_t seed = 0;
    double x = 0.0;
    std::string metric_name;
    double metric_value = 0.0;

    bool operator==(const ExperimentRecord&) const = default;
};

inline constexpr std::size_t kDefaultHorizon = 1000;
/// Tolerance of the reference solve for V* on the true nominal model.
inline constexpr double kReferenceTolerance = 1e-10;

/// Optimal robust values of the true nominal model under `set`.
ValueFunction reference_values(const TabularMDP& nominal, const AmbiguitySpec& set,
                               std::size_t workers = 1);

/**
 * Samples n_samples transitions per pair from the nominal model with `seed`,
 * runs REVI for k_max iterations on the estimate and records
 * |V_k - V*|_inf for k = 1..k_max (metric "error_inf"), where V* solves the
 * true nominal model.
 */
std::vector<ExperimentRecord> convergence_vs_iterations(const EnvFamily& env,
                                                        const AmbiguitySpec& set,
                                                        std::uint64_t n_samples, std::uint64_t seed,
                                                        std::size_t k_max, std::size_t workers = 1);

/// One record |V_K(N) - V*|_inf per (N, seed), N-major. Cells run concurrently.
std::vector<ExperimentRecord> convergence_vs_samples(const EnvFamily& env, const AmbiguitySpec& set,
                                                     const std::vector<std::uint64_t>& n_grid,
                                                     const std::vector<std::uint64_t>& seeds,
                                                     std::size_t k, std::size_t workers = 1);

/**
 * Simulates one episode. Each step draws, in order: u1 (a uniform action
 * replaces the policy action when u1 < rho; drawn only when rho > 0), the
 * replacement action index (only when replaced) and the next state by
 * inverse CDF. The start state is starts[below(|starts|)], drawn first.
 * Returns true iff a state in `goals` is entered within `horizon` steps;
 * entering any other terminal state ends the episode as a loss.
 * Throws std::invalid_argument when horizon == 0 or starts is empty.
 */
bool rollout(const TabularMDP& mdp, const Policy& policy, const std::vector<std::size_t>& starts,
             const std::vector<std::size_t>& goals, std::size_t horizon, double rho,
             SplitMix64& rng);

struct LabeledPolicy {
    std::string label;
    AmbiguitySpec set;  // set the policy was trained for, reported in the CSV
    Policy policy;
};

/**
 * For every sweep value (index i) and policy: builds perturb(env, parameter,
 * value) and runs `trials` rollouts; trial t uses the stream
 * derive_seed(derive_seed(seed, i), t), shared by all policies. Records the
 * success fraction as "win_fraction/<label>" with x = value.
 */
std::vector<ExperimentRecord> robustness_eval(const std::vector<LabeledPolicy>& policies,
                                              const EnvFamily& env, const std::string& parameter,
                                              const std::vector<double>& sweep, std::size_t trials,
                                              std::size_t horizon, std::uint64_t seed,
                                              std::size_t workers = 1);

/**
 * Policies compared by robustness experiments, all greedy after `iterations`
 * REVI steps:
 *   robust        `set` on the estimate from n_samples draws with `seed`
 *   nonrobust     radius 0 on the same estimate
 *   robust_exact  `set` on the true nominal model
 */
std::vector<LabeledPolicy> train_policies(const EnvFamily& env, const AmbiguitySpec& set,
                                          std::uint64_t n_samples, std::uint64_t seed,
                                          std::size_t iterations, std::size_t workers = 1);

} // namespace rmdp
