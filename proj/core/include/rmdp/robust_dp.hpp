#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rmdp/mdp.hpp"

namespace rmdp {

/// Outcome of a value-iteration style solve.
struct SolveReport {
    ValueFunction values;
    QFunction q;
    Policy policy;              // greedy w.r.t. q, lowest index on ties
    std::size_t iterations = 0;
    double residual = 0.0;      // |V_k - V_{k-1}|_inf at termination
    bool converged = true;
    std::vector<double> history;  // per-iteration residuals, when requested
};

struct SolveOptions {
    double tol = 1e-8;
    std::size_t max_iters = 100000;
    std::size_t workers = 1;
    bool record_history = false;
};

/// sigma over the (s, a) slice of the ambiguity set, centered at the MDP's kernel row.
double backup_sigma(const TabularMDP& mdp, const AmbiguitySpec& set, std::size_t s, std::size_t a,
                    std::span<const double> v);

struct BellmanResult {
    ValueFunction values;
    QFunction q;
};

/**
 * One robust Bellman backup: Q'(s,a) = r(s,a) + gamma sigma_{s,a}(v) and
 * V'(s) = max_a Q'(s,a). Terminal states back up to 0.
 * Throws std::invalid_argument when v does not match the state count.
 */
BellmanResult bellman_apply(const TabularMDP& mdp, const AmbiguitySpec& set,
                            std::span<const double> v, std::size_t workers = 1);

/**
 * Synchronous robust value iteration from V_0 = 0. Stops once
 * |V_{k+1} - V_k| <= tol (1 - gamma) / (2 gamma), which puts the returned
 * values within tol of the fixed point. Hitting max_iters first is reported
 * through `converged`, not an exception.
 */
SolveReport robust_value_iteration(const TabularMDP& mdp, const AmbiguitySpec& set,
                                   const SolveOptions& options = {});

/// Called after every REVI iteration k = 1..K with Q_k and V_k = max_a Q_k.
using ReviObserver = std::function<void(std::size_t k, const QFunction&, const ValueFunction&)>;

struct ReviOptions {
    std::size_t workers = 1;
    ReviObserver observer;
};

/**
 * Robust empirical value iteration on an estimated model: exactly K
 * synchronous iterations from Q_0 = 0, returning Q_K, V_K = max_a Q_K and
 * the greedy policy pi_K. `history` holds |V_k - V_{k-1}| for k = 1..K.
 * Throws std::invalid_argument when K < 1.
 */
SolveReport revi(const TabularMDP& mdp_hat, const AmbiguitySpec& set, std::size_t iterations,
                 const ReviOptions& options = {});

struct PolicyEvaluation {
    ValueFunction values;
    std::size_t iterations = 0;
    double residual = 0.0;
    bool converged = true;
};

/**
 * Robust value of a fixed policy: fixed point of
 * V(s) = r(s, pi(s)) + gamma sigma_{s, pi(s)}(V). For finite sets this is
 * the (s,a)-rectangular value, a lower bound on every per-model value.
 */
PolicyEvaluation robust_policy_evaluation(const TabularMDP& mdp, const AmbiguitySpec& set,
                                          const Policy& policy, double tol = 1e-8,
                                          std::size_t max_iters = 1000000, std::size_t workers = 1);

/// Value of a policy under a single model: the nominal kernel or `kernel_override`.
PolicyEvaluation nonrobust_policy_evaluation(const TabularMDP& mdp, const Policy& policy,
                                             const TransitionKernel* kernel_override = nullptr,
                                             double tol = 1e-8, std::size_t max_iters = 1000000);

/// Per-state argmax, lowest action index on ties.
Policy greedy_policy(const QFunction& q);

/// Throws std::invalid_argument unless every action index is admissible.
void check_policy(const TabularMDP& mdp, const Policy& policy);

double sup_distance(std::span<const double> a, std::span<const double> b);

} // namespace rmdp
