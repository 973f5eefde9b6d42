#include "rmdp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rmdp/robust_dp.hpp"

namespace rmdp {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

void check_common(SetKind kind, const ComplexityInputs& in) {
    require(in.gamma > 0.0 && in.gamma < 1.0, "gamma must lie in (0,1)");
    require(in.delta > 0.0 && in.delta < 1.0, "delta must lie in (0,1)");
    require(in.num_states >= 1, "the state count must be positive");
    require(in.num_actions >= 1, "the action count must be positive");
    const double upper = eps_upper_bound(kind, in.gamma);
    if (!(in.eps > 0.0 && in.eps < upper)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "eps must lie in (0, " << upper << ") for the " << to_string(kind) << " set";
        throw std::invalid_argument(msg.str());
    }
}

double horizon_factor(const ComplexityInputs& in) {
    const double g = in.gamma;
    return g * g * static_cast<double>(in.num_states) / (std::pow(1.0 - g, 4) * in.eps * in.eps);
}

double log_argument_scale(const ComplexityInputs& in) {
    return static_cast<double>(in.num_states) * static_cast<double>(in.num_actions) /
           (in.delta * in.eps * (1.0 - in.gamma) * (1.0 - in.gamma));
}

/// V_{pi,P}(0) for every model, minimum taken over the whole models.
double worst_model_value(const GapInstance& inst, const Policy& policy, double tol,
                         std::size_t max_iters) {
    const auto nominal = nonrobust_policy_evaluation(inst.nominal, policy, nullptr, tol, max_iters);
    const auto alt = nonrobust_policy_evaluation(inst.nominal, policy, &inst.alternative, tol, max_iters);
    return std::min(nominal.values[0], alt.values[0]);
}

} // namespace

double eps_upper_bound(SetKind kind, double gamma) {
    switch (kind) {
    case SetKind::TV: return 24.0 * gamma / (1.0 - gamma);
    case SetKind::Chi2: return 16.0 * gamma / (1.0 - gamma);
    case SetKind::KL: return 1.0 / (1.0 - gamma);
    default: throw std::invalid_argument("no sample-complexity bound for the " +
                                         std::string(to_string(kind)) + " set");
    }
}

double k0(double gamma, double eps) {
    require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0,1)");
    require(eps > 0.0 && std::isfinite(eps), "eps must be positive");
    return std::log(8.0 * gamma / (eps * (1.0 - gamma) * (1.0 - gamma))) / std::log(1.0 / gamma);
}

double n_tv(const ComplexityInputs& in) {
    check_common(SetKind::TV, in);
    return 72.0 * horizon_factor(in) * std::log(144.0 * in.gamma * log_argument_scale(in));
}

double n_chi2(const ComplexityInputs& in) {
    check_common(SetKind::Chi2, in);
    require(in.radius >= 0.0 && std::isfinite(in.radius), "radius must be non-negative");
    return 64.0 * (2.0 * in.radius + 1.0) * horizon_factor(in) *
           std::log(192.0 * in.gamma * log_argument_scale(in));
}

double n_kl(const ComplexityInputs& in) {
    check_common(SetKind::KL, in);
    require(in.radius > 0.0 && std::isfinite(in.radius), "radius must be positive");
    require(in.lambda_kl > 0.0 && std::isfinite(in.lambda_kl), "lambda_kl must be positive");
    const double g = in.gamma;
    const double lam = in.lambda_kl;
    const double sa = static_cast<double>(in.num_states) * static_cast<double>(in.num_actions);
    return 8.0 * horizon_factor(in) / (in.radius * in.radius) *
           std::exp((2.0 * lam + 4.0) / (lam * (1.0 - g))) *
           std::log(9.0 * sa / (in.delta * lam * (1.0 - g)));
}

double sample_threshold(SetKind kind, const ComplexityInputs& in) {
    switch (kind) {
    case SetKind::TV: return n_tv(in);
    case SetKind::Chi2: return n_chi2(in);
    case SetKind::KL: return n_kl(in);
    default: throw std::invalid_argument("no sample-complexity bound for the " +
                                         std::string(to_string(kind)) + " set");
    }
}

GapInstance gap_instance(double gamma) {
    require(gamma > kGapGammaMin && gamma < 1.0, "gamma must lie in (0.01, 1)");
    const std::vector<std::vector<std::string>> labels{{"a_l", "a_r"}, {"a_l", "a_r"}};
    const std::vector<std::vector<double>> rewards{{0.0, -100.0 * gamma / 99.0}, {0.0, 1.0}};
    const std::vector<std::vector<std::vector<double>>> nominal{
        {{1.0, 0.0}, {0.0, 1.0}},
        {{1.0, 0.0}, {0.0, 1.0}},
    };
    const std::vector<std::vector<std::vector<double>>> alternative{
        {{1.0, 0.0}, {0.0, 1.0}},
        {{1.0, 0.0}, {1.0, 0.0}},
    };
    return GapInstance{
        TabularMDP(gamma, labels, rewards, TransitionKernel::from_nested(nominal), {}),
        TransitionKernel::from_nested(alternative),
    };
}

GapValues gap_values(double gamma) {
    const GapInstance inst = gap_instance(gamma);
    GapValues out;
    out.v_robust_opt = 0.0;
    out.gap = gamma / (99.0 * (1.0 - gamma * gamma));
    out.v_nonrobust_worst = -out.gap;

    // Error of each evaluation stays below tol; values are O(1/(1-gamma)).
    const double tol = 1e-12 / (1.0 - gamma);
    const std::size_t max_iters = 10000000;

    SolveOptions options;
    options.tol = tol;
    options.max_iters = max_iters;
    out.nominal_policy = robust_value_iteration(inst.nominal, AmbiguitySpec::none(), options).policy;

    out.numeric_nonrobust_worst = worst_model_value(inst, out.nominal_policy, tol, max_iters);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a0 = 0; a0 < 2; ++a0) {
        for (std::size_t a1 = 0; a1 < 2; ++a1) {
            best = std::max(best, worst_model_value(inst, Policy{a0, a1}, tol, max_iters));
        }
    }
    out.numeric_robust_opt = best;
    out.numeric_gap = out.numeric_robust_opt - out.numeric_nonrobust_worst;
    out.discrepancy = std::max({std::abs(out.numeric_robust_opt - out.v_robust_opt),
                                std::abs(out.numeric_nonrobust_worst - out.v_nonrobust_worst),
                                std::abs(out.numeric_gap - out.gap)});
    if (!(out.discrepancy <= kGapAgreementTolerance)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "gap_values: numeric and analytic paths differ by " << out.discrepancy;
        throw std::runtime_error(msg.str());
    }
    return out;
}

} // namespace rmdp
