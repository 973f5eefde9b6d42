#pragma once

#include <cstddef>

#include "rmdp/mdp.hpp"

namespace rmdp {

struct ComplexityInputs {
    double gamma = 0.9;
    double eps = 0.1;
    double delta = 0.1;
    std::size_t num_states = 1;
    std::size_t num_actions = 1;
    double radius = 0.0;     // c_r, Chi2 and KL only
    double lambda_kl = 1.0;  // KL only
};

// The calculators return real thresholds; callers take the ceiling.
// Each throws std::invalid_argument when gamma is outside (0,1), delta
// outside (0,1), a count is zero, or eps leaves the admissible range:
//   TV (0, 24 gamma/(1-gamma)), Chi2 (0, 16 gamma/(1-gamma)), KL (0, 1/(1-gamma)).

/// log(8 gamma / (eps (1-gamma)^2)) / log(1/gamma); only gamma and eps > 0 are checked.
double k0(double gamma, double eps);

double n_tv(const ComplexityInputs& in);
/// Requires radius >= 0.
double n_chi2(const ComplexityInputs& in);
/// Requires radius > 0 and lambda_kl > 0.
double n_kl(const ComplexityInputs& in);

/// Dispatches by kind; None and FiniteSet are rejected.
double sample_threshold(SetKind kind, const ComplexityInputs& in);

/// Upper end of the admissible eps interval for `kind`.
double eps_upper_bound(SetKind kind, double gamma);

inline constexpr double kGapGammaMin = 0.01;

struct GapInstance {
    TabularMDP nominal;          // P^o
    TransitionKernel alternative;  // P'
};

/**
 * Two-state chain with actions {a_l, a_r} in both states.
 *   r(0, a_r) = -100 gamma / 99, r(1, a_r) = 1, all other rewards 0.
 *   P^o: a_l moves to 0, a_r moves to 1 (from either state).
 *   P':  as P^o, except a_r from state 1 moves to 0.
 * Throws std::invalid_argument unless gamma lies in (0.01, 1).
 */
GapInstance gap_instance(double gamma);

struct GapValues {
    // Analytic values at state 0.
    double v_robust_opt = 0.0;       // max_pi min_P V_{pi,P}(0) = 0
    double v_nonrobust_worst = 0.0;  // min_P V_{pi^o,P}(0) = -gamma / (99 (1 - gamma^2))
    double gap = 0.0;                // gamma / (99 (1 - gamma^2))

    // The same numbers from value iteration and policy evaluation, taking the
    // minimum over the two whole models.
    double numeric_robust_opt = 0.0;
    double numeric_nonrobust_worst = 0.0;
    double numeric_gap = 0.0;
    double discrepancy = 0.0;  // largest analytic vs numeric difference

    Policy nominal_policy;  // pi^o, greedy for P^o
};

inline constexpr double kGapAgreementTolerance = 1e-9;

/// Throws std::invalid_argument for gamma out of range and std::runtime_error
/// when the two paths disagree by more than kGapAgreementTolerance.
GapValues gap_values(double gamma);

} // namespace rmdp
