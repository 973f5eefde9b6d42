#include "rmdp/robust_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rmdp/ambiguity.hpp"
#include "rmdp/parallel.hpp"

namespace rmdp {

namespace {

void check_values(const TabularMDP& mdp, std::span<const double> v) {
    if (v.size() != mdp.num_states()) {
        throw std::invalid_argument("value function has " + std::to_string(v.size()) +
                                    " entries for " + std::to_string(mdp.num_states()) + " states");
    }
}

double stop_threshold(double tol, double gamma) {
    return tol * (1.0 - gamma) / (2.0 * gamma);
}

/// Q'(s, .) and V'(s) for states in [begin, end).
void sweep(const TabularMDP& mdp, const AmbiguitySpec& set, std::span<const double> v,
           QFunction& q, ValueFunction& out, std::size_t begin, std::size_t end) {
    const double gamma = mdp.gamma();
    for (std::size_t s = begin; s < end; ++s) {
        auto row = q.row(s);
        if (mdp.is_terminal(s)) {
            std::fill(row.begin(), row.end(), 0.0);
            out[s] = 0.0;
            continue;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < row.size(); ++a) {
            row[a] = mdp.reward(s, a) + gamma * backup_sigma(mdp, set, s, a, v);
            best = std::max(best, row[a]);
        }
        out[s] = best;
    }
}

void parallel_sweep(const TabularMDP& mdp, const AmbiguitySpec& set, std::span<const double> v,
                    QFunction& q, ValueFunction& out, std::size_t workers) {
    parallel_for(mdp.num_states(), workers, [&](std::size_t begin, std::size_t end) {
        sweep(mdp, set, v, q, out, begin, end);
    });
}

void check_set(const TabularMDP& mdp, const AmbiguitySpec& set) {
    auto issues = validate_ambiguity(set, mdp);
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

PolicyEvaluation evaluate(const TabularMDP& mdp, const AmbiguitySpec& set, const Policy& policy,
                          double tol, std::size_t max_iters, std::size_t workers) {
    check_policy(mdp, policy);
    if (!(tol > 0.0)) throw std::invalid_argument("policy evaluation: tol must be positive");
    const std::size_t n = mdp.num_states();
    const double gamma = mdp.gamma();
    const double threshold = stop_threshold(tol, gamma);

    PolicyEvaluation result;
    ValueFunction v(n, 0.0);
    ValueFunction next(n, 0.0);
    result.converged = false;
    for (std::size_t k = 0; k < max_iters; ++k) {
        parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
            for (std::size_t s = begin; s < end; ++s) {
                if (mdp.is_terminal(s)) {
                    next[s] = 0.0;
                    continue;
                }
                const std::size_t a = policy[s];
                next[s] = mdp.reward(s, a) + gamma * backup_sigma(mdp, set, s, a, v);
            }
        });
        result.residual = sup_distance(next, v);
        result.iterations = k + 1;
        v.swap(next);
        if (result.residual <= threshold) {
            result.converged = true;
            break;
        }
    }
    result.values = std::move(v);
    return result;
}

} // namespace

double sup_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double backup_sigma(const TabularMDP& mdp, const AmbiguitySpec& set, std::size_t s, std::size_t a,
                    std::span<const double> v) {
    if (set.kind == SetKind::FiniteSet) {
        std::vector<std::span<const double>> rows;
        rows.reserve(set.models.size());
        for (const auto& model : set.models) rows.push_back(model.row(s, a));
        return sigma_finite_set(rows, v).value;
    }
    return sigma_value(set.kind, mdp.row(s, a), v, set.radius);
}

BellmanResult bellman_apply(const TabularMDP& mdp, const AmbiguitySpec& set,
                            std::span<const double> v, std::size_t workers) {
    check_values(mdp, v);
    BellmanResult result{ValueFunction(mdp.num_states(), 0.0), QFunction(mdp.layout())};
    parallel_sweep(mdp, set, v, result.q, result.values, workers);
    return result;
}

SolveReport robust_value_iteration(const TabularMDP& mdp, const AmbiguitySpec& set,
                                   const SolveOptions& options) {
    if (!(options.tol > 0.0)) throw std::invalid_argument("robust_value_iteration: tol must be positive");
    check_set(mdp, set);
    const std::size_t n = mdp.num_states();
    const double threshold = stop_threshold(options.tol, mdp.gamma());

    SolveReport report;
    report.converged = false;
    ValueFunction v(n, 0.0);
    ValueFunction next(n, 0.0);
    QFunction q(mdp.layout());
    for (std::size_t k = 0; k < options.max_iters; ++k) {
        parallel_sweep(mdp, set, v, q, next, options.workers);
        report.residual = sup_distance(next, v);
        report.iterations = k + 1;
        if (options.record_history) report.history.push_back(report.residual);
        v.swap(next);
        if (report.residual <= threshold) {
            report.converged = true;
            break;
        }
    }
    report.values = std::move(v);
    report.q = std::move(q);
    report.policy = greedy_policy(report.q);
    return report;
}

SolveReport revi(const TabularMDP& mdp_hat, const AmbiguitySpec& set, std::size_t iterations,
                 const ReviOptions& options) {
    if (iterations < 1) throw std::invalid_argument("revi: the iteration count K must be at least 1");
    check_set(mdp_hat, set);
    const std::size_t n = mdp_hat.num_states();

    SolveReport report;
    ValueFunction v(n, 0.0);  // V_0 = max_a Q_0 = 0
    ValueFunction next(n, 0.0);
    QFunction q(mdp_hat.layout());
    for (std::size_t k = 1; k <= iterations; ++k) {
        parallel_sweep(mdp_hat, set, v, q, next, options.workers);
        report.residual = sup_distance(next, v);
        report.history.push_back(report.residual);
        v.swap(next);
        if (options.observer) options.observer(k, q, v);
    }
    report.iterations = iterations;
    report.values = std::move(v);
    report.q = std::move(q);
    report.policy = greedy_policy(report.q);
    return report;
}

PolicyEvaluation robust_policy_evaluation(const TabularMDP& mdp, const AmbiguitySpec& set,
                                          const Policy& policy, double tol, std::size_t max_iters,
                                          std::size_t workers) {
    check_set(mdp, set);
    return evaluate(mdp, set, policy, tol, max_iters, workers);
}

PolicyEvaluation nonrobust_policy_evaluation(const TabularMDP& mdp, const Policy& policy,
                                             const TransitionKernel* kernel_override, double tol,
                                             std::size_t max_iters) {
    if (kernel_override) {
        const TabularMDP other = mdp.with_kernel(*kernel_override);
        for (std::size_t s = 0; s < other.num_states(); ++s) {
            for (std::size_t a = 0; a < other.num_actions(s); ++a) {
                auto issues = validate_row(other.row(s, a), s, a);
                if (!issues.empty()) throw ValidationError(std::move(issues));
            }
        }
        return evaluate(other, AmbiguitySpec::none(), policy, tol, max_iters, 1);
    }
    return evaluate(mdp, AmbiguitySpec::none(), policy, tol, max_iters, 1);
}

Policy greedy_policy(const QFunction& q) {
    const PairLayout& layout = q.layout();
    Policy policy(layout.num_states(), 0);
    for (std::size_t s = 0; s < layout.num_states(); ++s) {
        auto row = q.row(s);
        std::size_t best = 0;
        for (std::size_t a = 1; a < row.size(); ++a) {
            if (row[a] > row[best]) best = a;
        }
        policy[s] = best;
    }
    return policy;
}

void check_policy(const TabularMDP& mdp, const Policy& policy) {
    if (policy.size() != mdp.num_states()) {
        throw std::invalid_argument("policy has " + std::to_string(policy.size()) + " entries for " +
                                    std::to_string(mdp.num_states()) + " states");
    }
    for (std::size_t s = 0; s < policy.size(); ++s) {
        if (mdp.is_terminal(s)) continue;
        if (policy[s] >= mdp.num_actions(s)) {
            throw std::invalid_argument("policy action " + std::to_string(policy[s]) +
                                        " is not admissible at state " + std::to_string(s));
        }
    }
}

} // namespace rmdp
