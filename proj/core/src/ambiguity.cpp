#include "rmdp/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rmdp/search.hpp"

namespace rmdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dims(std::span<const double> center, std::span<const double> v) {
    if (center.size() != v.size()) {
        throw std::invalid_argument("sigma: center has " + std::to_string(center.size()) +
                                    " entries but v has " + std::to_string(v.size()));
    }
    if (center.empty()) throw std::invalid_argument("sigma: empty distribution");
}

std::size_t argmin_index(std::span<const double> v) {
    return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

void normalize(Distribution& p) {
    double total = 0.0;
    for (double& x : p) {
        if (x < 0.0) x = 0.0;
        total += x;
    }
    if (total > 0.0) {
        for (double& x : p) x /= total;
    }
}

/// Moves p toward q until its divergence is within the radius. Chi-square
/// scales exactly quadratically along the segment; KL is convex, so the
/// linear factor radius/div is enough.
void pull_into_ball(SetKind kind, Distribution& p, std::span<const double> q, double radius) {
    const double div = divergence(kind, p, q);
    if (div <= radius) return;
    const double t = kind == SetKind::Chi2 ? std::sqrt(radius / div) : radius / div;
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = q[j] + t * (p[j] - q[j]);
    normalize(p);
}

// ---------------------------------------------------------------- TV

double tv_impl(std::span<const double> center, std::span<const double> v, double radius,
               Distribution* worst, double* moved) {
    if (radius <= 0.0) {
        if (worst) worst->assign(center.begin(), center.end());
        *moved = 0.0;
        return dot(center, v);
    }
    const std::size_t target = argmin_index(v);
    if (radius >= 1.0 - center[target]) {
        if (worst) {
            worst->assign(center.size(), 0.0);
            (*worst)[target] = 1.0;
        }
        *moved = 1.0 - center[target];
        return v[target];
    }

    std::vector<std::size_t> donors;
    donors.reserve(center.size());
    for (std::size_t j = 0; j < center.size(); ++j) {
        if (j != target && center[j] > 0.0 && v[j] > v[target]) donors.push_back(j);
    }
    std::sort(donors.begin(), donors.end(), [&](std::size_t a, std::size_t b) {
        return v[a] != v[b] ? v[a] > v[b] : a < b;
    });

    if (worst) worst->assign(center.begin(), center.end());
    double value = dot(center, v);
    double remaining = radius;
    for (std::size_t j : donors) {
        if (remaining <= 0.0) break;
        const double m = std::min(center[j], remaining);
        value -= m * (v[j] - v[target]);
        remaining -= m;
        if (worst) {
            (*worst)[j] -= m;
            (*worst)[target] += m;
        }
    }
    *moved = radius - remaining;
    return value;
}

// ---------------------------------------------------------------- Chi2

struct SupportEntry {
    double x;  // v shifted by the support minimum
    double q;
    std::size_t index;
};

/// Sufficient statistics of the states clipped below the threshold.
struct LowerPart {
    double mass = 0.0;     // q(L)
    double mean = 0.0;     // E[x | L]
    double scatter = 0.0;  // sum_L q (x - mean)^2
};

struct Chi2Segment {
    LowerPart low;
    double upper_mass;  // q(H), states clipped to omega
    double lo;
    double hi;
};

double chi2_objective(const Chi2Segment& seg, double radius, double omega) {
    const double d = omega - seg.low.mean;
    const double var = seg.low.scatter + seg.low.mass * seg.upper_mass * d * d;
    return seg.low.mass * seg.low.mean + seg.upper_mass * omega -
           std::sqrt(radius * std::max(0.0, var));
}

/// Sign-carrying factor of the segment derivative, decreasing in omega.
double chi2_slope_factor(const Chi2Segment& seg, double radius, double omega) {
    const double d = omega - seg.low.mean;
    const double var = seg.low.scatter + seg.low.mass * seg.upper_mass * d * d;
    if (var <= 0.0) return 1.0;
    return 1.0 - std::sqrt(radius / var) * seg.low.mass * d;
}

double chi2_impl(std::span<const double> center, std::span<const double> v, double radius,
                 Distribution* worst, double* omega_out) {
    std::vector<SupportEntry> sup;
    sup.reserve(center.size());
    for (std::size_t j = 0; j < center.size(); ++j) {
        if (center[j] > 0.0) sup.push_back({v[j], center[j], j});
    }
    if (sup.empty()) throw std::invalid_argument("sigma_chi2: center has no support");
    std::sort(sup.begin(), sup.end(), [](const SupportEntry& a, const SupportEntry& b) {
        return a.x != b.x ? a.x < b.x : a.index < b.index;
    });
    if (radius <= 0.0) {
        if (worst) worst->assign(center.begin(), center.end());
        *omega_out = sup.back().x;
        return dot(center, v);
    }
    const double base = sup.front().x;
    for (auto& e : sup) e.x -= base;

    if (sup.back().x == 0.0) {
        if (worst) worst->assign(center.begin(), center.end());
        *omega_out = base;
        return base;
    }

    std::vector<double> suffix(sup.size() + 1, 0.0);
    for (std::size_t i = sup.size(); i-- > 0;) suffix[i] = suffix[i + 1] + sup[i].q;

    LowerPart low;
    Chi2Segment best_seg{};
    Maximum1D best{0.0, -kInf};
    std::size_t i = 0;
    while (i < sup.size()) {
        const double group_x = sup[i].x;
        while (i < sup.size() && sup[i].x == group_x) {
            const double w = sup[i].q;
            const double m = low.mass + w;
            const double delta = sup[i].x - low.mean;
            low.mean += (w / m) * delta;
            low.scatter += w * delta * (sup[i].x - low.mean);
            low.mass = m;
            ++i;
        }
        if (i == sup.size()) break;
        const Chi2Segment seg{low, suffix[i], group_x, sup[i].x};
        const Maximum1D m =
            ternary_search_max([&](double w) { return chi2_objective(seg, radius, w); }, seg.lo, seg.hi);
        if (m.value > best.value) {
            best = m;
            best_seg = seg;
        }
    }

    // Refine inside the winning segment with the monotone derivative sign.
    {
        double lo = best_seg.lo;
        double hi = best_seg.hi;
        double cand;
        if (chi2_slope_factor(best_seg, radius, hi) >= 0.0) {
            cand = hi;
        } else if (chi2_slope_factor(best_seg, radius, lo) <= 0.0) {
            cand = lo;
        } else {
            for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                (chi2_slope_factor(best_seg, radius, mid) > 0.0 ? lo : hi) = mid;
            }
            cand = 0.5 * (lo + hi);
        }
        const double f = chi2_objective(best_seg, radius, cand);
        if (f >= best.value) best = {cand, f};
    }

    // Interior optimum: with d = omega - E[x | L] the stationarity condition
    // reads d^2 m (r m - h) = scatter. The closed-form root puts exactly zero
    // mass above the threshold, which bisection only approaches to ~1e-9.
    if (best.argmax > best_seg.lo && best.argmax < best_seg.hi) {
        const double m = best_seg.low.mass;
        const double denom = m * (radius * m - best_seg.upper_mass);
        if (denom > 0.0 && best_seg.low.scatter > 0.0) {
            const double root = best_seg.low.mean + std::sqrt(best_seg.low.scatter / denom);
            if (root >= best_seg.lo && root <= best_seg.hi) {
                const double f = chi2_objective(best_seg, radius, root);
                const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(best.value));
                if (f >= best.value - slack) best = {root, std::max(f, best.value)};
            }
        }
    }

    *omega_out = base + best.argmax;
    if (worst) {
        const double omega = best.argmax;
        double mean = 0.0;
        for (const auto& e : sup) mean += e.q * std::min(e.x, omega);
        double var = 0.0;
        for (const auto& e : sup) {
            const double d = std::min(e.x, omega) - mean;
            var += e.q * d * d;
        }
        worst->assign(center.size(), 0.0);
        if (var > 0.0) {
            const double k = std::sqrt(radius / var);
            for (const auto& e : sup) {
                (*worst)[e.index] = e.q * (1.0 - k * (std::min(e.x, omega) - mean));
            }
        } else {
            // Threshold at the support minimum: condition the center on its argmin set.
            for (const auto& e : sup) {
                if (e.x == 0.0) (*worst)[e.index] = e.q;
            }
        }
        normalize(*worst);
        pull_into_ball(SetKind::Chi2, *worst, center, radius);
    }
    return base + best.value;
}

// ---------------------------------------------------------------- KL

struct KlSupport {
    std::vector<double> log_q;
    std::vector<double> x;  // shifted values, min 0
    std::vector<std::size_t> index;
    double base = 0.0;
    double span = 0.0;
};

KlSupport kl_support(std::span<const double> center, std::span<const double> v) {
    KlSupport s;
    double vmin = kInf;
    double vmax = -kInf;
    for (std::size_t j = 0; j < center.size(); ++j) {
        if (center[j] > 0.0) {
            vmin = std::min(vmin, v[j]);
            vmax = std::max(vmax, v[j]);
        }
    }
    for (std::size_t j = 0; j < center.size(); ++j) {
        if (center[j] > 0.0) {
            s.log_q.push_back(std::log(center[j]));
            s.x.push_back(v[j] - vmin);
            s.index.push_back(j);
        }
    }
    if (s.x.empty()) throw std::invalid_argument("sigma_kl: center has no support");
    s.base = vmin;
    s.span = vmax - vmin;
    return s;
}

/// log E_q[exp(-x / lambda)] via log-sum-exp, lambda > 0.
double kl_log_mgf(const KlSupport& s, double lambda) {
    double top = -kInf;
    for (std::size_t i = 0; i < s.x.size(); ++i) top = std::max(top, s.log_q[i] - s.x[i] / lambda);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) acc += std::exp(s.log_q[i] - s.x[i] / lambda - top);
    return top + std::log(acc);
}

double kl_shifted_dual(const KlSupport& s, double radius, double lambda) {
    if (lambda <= 0.0) return 0.0;
    return -radius * lambda - lambda * kl_log_mgf(s, lambda);
}

/// Log-probabilities of the exponential tilt at lambda > 0.
std::vector<double> kl_tilt_log(const KlSupport& s, double lambda) {
    const double lse = kl_log_mgf(s, lambda);
    std::vector<double> lp(s.x.size());
    for (std::size_t i = 0; i < s.x.size(); ++i) lp[i] = s.log_q[i] - s.x[i] / lambda - lse;
    return lp;
}

/// Derivative of the dual: KL(tilt || q) - radius. Decreasing in lambda.
double kl_dual_slope(const KlSupport& s, double radius, double lambda) {
    const auto lp = kl_tilt_log(s, lambda);
    double kl = 0.0;
    for (std::size_t i = 0; i < lp.size(); ++i) {
        const double p = std::exp(lp[i]);
        if (p > 0.0) kl += p * (lp[i] - s.log_q[i]);
    }
    return kl - radius;
}

double kl_impl(std::span<const double> center, std::span<const double> v, double radius,
               Distribution* worst, double* lambda_out) {
    const KlSupport s = kl_support(center, v);
    if (s.span == 0.0) {
        if (worst) worst->assign(center.begin(), center.end());
        *lambda_out = 0.0;
        return s.base;
    }
    const double hi = s.span / radius;
    Maximum1D best = ternary_search_max([&](double l) { return kl_shifted_dual(s, radius, l); }, 0.0, hi);

    // Polish the multiplier with the monotone derivative so the tilt lands on
    // the ball boundary.
    {
        double lo = 0.0;
        double up = hi;
        if (kl_dual_slope(s, radius, up) < 0.0) {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + up);
                if (mid <= lo || mid >= up) break;
                (kl_dual_slope(s, radius, mid) > 0.0 ? lo : up) = mid;
            }
        } else {
            lo = up;
        }
        // The dual is flat at the optimum, so the polished multiplier can
        // evaluate an ulp below the ternary one; it still gives the better tilt.
        const double cand = up;
        const double g = kl_shifted_dual(s, radius, cand);
        const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(best.value));
        if (g >= best.value - slack) best = {cand, std::max(g, best.value)};
    }

    double value = best.value;
    double lambda = best.argmax;
    if (value <= 0.0) {
        value = 0.0;
        lambda = 0.0;
    }
    *lambda_out = lambda;

    if (worst) {
        worst->assign(center.size(), 0.0);
        if (lambda > 0.0) {
            const auto lp = kl_tilt_log(s, lambda);
            for (std::size_t i = 0; i < lp.size(); ++i) (*worst)[s.index[i]] = std::exp(lp[i]);
        } else {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (s.x[i] == 0.0) (*worst)[s.index[i]] = center[s.index[i]];
            }
        }
        normalize(*worst);
        pull_into_ball(SetKind::KL, *worst, center, radius);
    }
    return s.base + value;
}

} // namespace

double dot(std::span<const double> p, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) acc += p[j] * v[j];
    return acc;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) acc += std::abs(p[j] - q[j]);
    return 0.5 * acc;
}

double chi2_divergence(std::span<const double> p, std::span<const double> q) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (q[j] > 0.0) {
            const double d = p[j] - q[j];
            acc += d * d / q[j];
        } else if (p[j] > 0.0) {
            return kInf;
        }
    }
    return acc;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] <= 0.0) continue;
        if (q[j] <= 0.0) return kInf;
        acc += p[j] * std::log(p[j] / q[j]);
    }
    return std::max(acc, 0.0);
}

double divergence(SetKind kind, std::span<const double> p, std::span<const double> q) {
    switch (kind) {
    case SetKind::None:
    case SetKind::TV: return tv_distance(p, q);
    case SetKind::Chi2: return chi2_divergence(p, q);
    case SetKind::KL: return kl_divergence(p, q);
    case SetKind::FiniteSet: break;
    }
    throw std::invalid_argument("divergence: finite sets have no divergence");
}

SigmaResult sigma_tv(std::span<const double> center, std::span<const double> v, double radius) {
    check_dims(center, v);
    if (radius < 0.0) throw std::invalid_argument("sigma_tv: negative radius");
    SigmaResult r;
    r.value = tv_impl(center, v, radius, &r.worst_case, &r.dual);
    return r;
}

SigmaResult sigma_chi2(std::span<const double> center, std::span<const double> v, double radius) {
    check_dims(center, v);
    if (radius < 0.0) throw std::invalid_argument("sigma_chi2: negative radius");
    SigmaResult r;
    r.value = chi2_impl(center, v, radius, &r.worst_case, &r.dual);
    return r;
}

SigmaResult sigma_kl(std::span<const double> center, std::span<const double> v, double radius) {
    check_dims(center, v);
    if (!(radius > 0.0)) throw std::invalid_argument("sigma_kl: radius must be positive");
    SigmaResult r;
    r.value = kl_impl(center, v, radius, &r.worst_case, &r.dual);
    return r;
}

SigmaResult sigma_kl_zero_radius(std::span<const double> center, std::span<const double> v) {
    check_dims(center, v);
    return {dot(center, v), Distribution(center.begin(), center.end()), 0.0};
}

SigmaResult sigma_finite_set(std::span<const std::span<const double>> models,
                             std::span<const double> v) {
    if (models.empty()) throw std::invalid_argument("sigma_finite_set: empty model list");
    std::size_t best = 0;
    double best_value = kInf;
    for (std::size_t m = 0; m < models.size(); ++m) {
        check_dims(models[m], v);
        const double value = dot(models[m], v);
        if (value < best_value) {
            best_value = value;
            best = m;
        }
    }
    return {best_value, Distribution(models[best].begin(), models[best].end()),
            static_cast<double>(best)};
}

SigmaResult sigma(SetKind kind, std::span<const double> center, std::span<const double> v,
                  double radius) {
    switch (kind) {
    case SetKind::None: return sigma_tv(center, v, 0.0);
    case SetKind::TV: return sigma_tv(center, v, radius);
    case SetKind::Chi2: return sigma_chi2(center, v, radius);
    case SetKind::KL:
        return radius > 0.0 ? sigma_kl(center, v, radius) : sigma_kl_zero_radius(center, v);
    case SetKind::FiniteSet: break;
    }
    throw std::invalid_argument("sigma: finite sets need explicit models");
}

double sigma_value(SetKind kind, std::span<const double> center, std::span<const double> v,
                   double radius) {
    check_dims(center, v);
    double dual = 0.0;
    switch (kind) {
    case SetKind::None: return dot(center, v);
    case SetKind::TV: return tv_impl(center, v, radius, nullptr, &dual);
    case SetKind::Chi2: return chi2_impl(center, v, radius, nullptr, &dual);
    case SetKind::KL: return radius > 0.0 ? kl_impl(center, v, radius, nullptr, &dual) : dot(center, v);
    case SetKind::FiniteSet: break;
    }
    throw std::invalid_argument("sigma_value: finite sets need explicit models");
}

double kl_dual_objective(std::span<const double> center, std::span<const double> v, double radius,
                         double lambda) {
    check_dims(center, v);
    const KlSupport s = kl_support(center, v);
    return s.base + kl_shifted_dual(s, radius, lambda);
}

} // namespace rmdp
