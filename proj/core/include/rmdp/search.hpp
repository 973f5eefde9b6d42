#pragma once

#include <cmath>
#include <utility>

namespace rmdp {

/// Result of a one-dimensional maximization.
struct Maximum1D {
    double argmax;
    double value;
};

inline constexpr int kTernaryMaxIterations = 200;

/**
 * Ternary search for the maximum of a function that is unimodal (for
 * example concave) on [lo, hi].
 *
 * Stops after kTernaryMaxIterations or once the bracket is no wider than
 * 1e-12 * (1 + |bracket|). The endpoints are evaluated too, so a maximum
 * sitting on the boundary is never lost to bracket shrinkage.
 */
template <class F>
Maximum1D ternary_search_max(F&& f, double lo, double hi) {
    Maximum1D best{lo, f(lo)};
    if (const double fh = f(hi); fh > best.value) best = {hi, fh};
    for (int it = 0; it < kTernaryMaxIterations; ++it) {
        const double width = hi - lo;
        if (width <= 1e-12 * (1.0 + std::abs(lo) + std::abs(hi))) break;
        const double m1 = lo + width / 3.0;
        const double m2 = hi - width / 3.0;
        const double f1 = f(m1);
        const double f2 = f(m2);
        if (f1 > best.value) best = {m1, f1};
        if (f2 > best.value) best = {m2, f2};
        if (f1 < f2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    const double mid = 0.5 * (lo + hi);
    if (const double fm = f(mid); fm > best.value) best = {mid, fm};
    return best;
}

} // namespace rmdp
