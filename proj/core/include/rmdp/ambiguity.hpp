#pragma once

#include <span>
#include <vector>

#include "rmdp/mdp.hpp"

namespace rmdp {

/**
 * Worst-case expectation sigma(v) = inf { p . v : p in set } together with a
 * distribution attaining it.
 *
 * `dual` holds the kind-specific optimizer: probability mass moved (TV),
 * clipping threshold omega (Chi2), multiplier lambda (KL), index of the
 * minimizing model (FiniteSet).
 */
struct SigmaResult {
    double value = 0.0;
    Distribution worst_case;
    double dual = 0.0;
};

/// Slack allowed on the divergence of a returned worst-case distribution.
inline constexpr double kWorstCaseSlack = 1e-8;

// Every sigma_* function throws std::invalid_argument when center and v
// have different lengths.

/**
 * Total-variation ball {p : (1/2)|p - center|_1 <= radius}.
 *
 * Exact greedy transport: up to `radius` mass leaves the support states in
 * descending order of v and lands on the state with the smallest v (lowest
 * index among ties).
 */
SigmaResult sigma_tv(std::span<const double> center, std::span<const double> v, double radius);

/**
 * Chi-square ball {p : sum (p - center)^2 / center <= radius}.
 *
 * Maximizes E[w] - sqrt(radius Var[w]) over thresholded w = min(v, omega),
 * one concave ternary search per interval between consecutive distinct
 * support values of v. States outside the center's support cannot gain mass.
 */
SigmaResult sigma_chi2(std::span<const double> center, std::span<const double> v, double radius);

/**
 * KL ball {p : KL(p || center) <= radius}, radius > 0.
 *
 * Maximizes g(lambda) = -radius lambda - lambda log E_center[exp(-v'/lambda)]
 * over lambda in [0, span / radius], where v' = v - min_support(v) and span
 * = max v'. The worst case is the exponential tilt of the center.
 * Throws std::invalid_argument when radius <= 0.
 */
SigmaResult sigma_kl(std::span<const double> center, std::span<const double> v, double radius);

/// Radius-zero KL set: the plain expectation.
SigmaResult sigma_kl_zero_radius(std::span<const double> center, std::span<const double> v);

/// Minimum expectation over an explicit list of rows; ties go to the lowest index.
SigmaResult sigma_finite_set(std::span<const std::span<const double>> models,
                             std::span<const double> v);

/// Dispatches TV/Chi2/KL/None by kind. KL with radius 0 is the expectation.
SigmaResult sigma(SetKind kind, std::span<const double> center, std::span<const double> v,
                  double radius);

/// Same as sigma(), without building the worst-case distribution.
double sigma_value(SetKind kind, std::span<const double> center, std::span<const double> v,
                   double radius);

/// g(lambda) from sigma_kl on the unshifted v; lambda = 0 returns the
/// support minimum (the limit).
double kl_dual_objective(std::span<const double> center, std::span<const double> v,
                         double radius, double lambda);

double dot(std::span<const double> p, std::span<const double> v);
double tv_distance(std::span<const double> p, std::span<const double> q);
/// +inf when p puts mass where q does not.
double chi2_divergence(std::span<const double> p, std::span<const double> q);
/// +inf when p puts mass where q does not.
double kl_divergence(std::span<const double> p, std::span<const double> q);
/// Divergence that defines the ball of `kind` (TV distance, chi-square or KL).
double divergence(SetKind kind, std::span<const double> p, std::span<const double> q);

inline constexpr std::size_t kGridOracleMaxDimension = 4;

/**
 * Independent brute-force value of sigma: the minimum of p . v over the
 * simplex grid with step h = 1/M, keeping points whose divergence to center
 * is at most radius.
 *
 * Along the last free coordinate the divergence is convex and p . v is
 * linear, so the feasible grid points on each line are found by a convex
 * integer search; the result is identical to full enumeration.
 * Throws std::invalid_argument for dimension > 4, h <= 0, 1/h not an
 * integer, or an unsupported kind; std::domain_error when no grid point
 * is feasible.
 */
double sigma_grid_oracle(std::span<const double> center, std::span<const double> v,
                         double radius, SetKind kind, double h);

} // namespace rmdp
