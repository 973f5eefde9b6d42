// Brute-force sigma on a discretized simplex. Uses only the divergence
// definitions, never the closed-form or dual solvers it is meant to check.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rmdp/ambiguity.hpp"

namespace rmdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class GridSearch {
public:
    GridSearch(std::span<const double> center, std::span<const double> v, double radius,
               SetKind kind, long steps)
        : center_(center), v_(v), radius_(radius), kind_(kind), steps_(steps),
          counts_(center.size(), 0), point_(center.size(), 0.0) {}

    double run() {
        if (center_.size() == 1) {
            point_[0] = 1.0;
            return feasible() ? v_[0] : kInf;
        }
        recurse(0, steps_);
        return best_;
    }

private:
    bool blocked(std::size_t j, long k) const {
        // Chi-square and KL balls never put mass outside the center's support.
        return k > 0 && kind_ != SetKind::TV && center_[j] <= 0.0;
    }

    bool feasible() const { return divergence(kind_, point_, center_) <= radius_; }

    void set(std::size_t j, long k) {
        counts_[j] = k;
        point_[j] = static_cast<double>(k) / static_cast<double>(steps_);
    }

    double divergence_at(std::size_t a, std::size_t b, long t, long rest) {
        set(a, t);
        set(b, rest - t);
        return divergence(kind_, point_, center_);
    }

    void recurse(std::size_t j, long rest) {
        const std::size_t n = center_.size();
        if (j + 2 == n) {
            line(j, j + 1, rest);
            return;
        }
        for (long k = 0; k <= rest; ++k) {
            if (blocked(j, k)) break;
            set(j, k);
            recurse(j + 1, rest - k);
        }
        set(j, 0);
    }

    /// Coordinates a and b share `rest` grid units; the divergence is convex
    /// in the split t, the objective linear, so only the two extreme feasible
    /// splits can be optimal.
    void line(std::size_t a, std::size_t b, long rest) {
        long lo = 0;
        long hi = rest;
        if (blocked(a, 1)) hi = 0;
        if (blocked(b, 1)) lo = rest;
        if (lo > hi) return;

        auto d = [&](long t) { return divergence_at(a, b, t, rest); };

        // Integer minimization of a convex function.
        long l = lo;
        long h = hi;
        while (h - l > 2) {
            const long m1 = l + (h - l) / 3;
            const long m2 = h - (h - l) / 3;
            const double f1 = d(m1);
            const double f2 = d(m2);
            if (f1 < f2) {
                h = m2 - 1;
            } else if (f1 > f2) {
                l = m1 + 1;
            } else {
                l = m1;
                h = m2;
            }
        }
        long t_min = l;
        double f_min = d(l);
        for (long t = l + 1; t <= h; ++t) {
            if (const double f = d(t); f < f_min) {
                f_min = f;
                t_min = t;
            }
        }
        if (!(f_min <= radius_)) return;

        // Leftmost feasible split in [lo, t_min].
        long left_lo = lo;
        long left_hi = t_min;
        while (left_lo < left_hi) {
            const long mid = left_lo + (left_hi - left_lo) / 2;
            if (d(mid) <= radius_) left_hi = mid;
            else left_lo = mid + 1;
        }
        // Rightmost feasible split in [t_min, hi].
        long right_lo = t_min;
        long right_hi = hi;
        while (right_lo < right_hi) {
            const long mid = right_lo + (right_hi - right_lo + 1) / 2;
            if (d(mid) <= radius_) right_lo = mid;
            else right_hi = mid - 1;
        }

        for (long t : {left_lo, right_lo}) {
            set(a, t);
            set(b, rest - t);
            best_ = std::min(best_, dot(point_, v_));
        }
    }

    std::span<const double> center_;
    std::span<const double> v_;
    double radius_;
    SetKind kind_;
    long steps_;
    std::vector<long> counts_;
    std::vector<double> point_;
    double best_ = kInf;
};

} // namespace

double sigma_grid_oracle(std::span<const double> center, std::span<const double> v, double radius,
                         SetKind kind, double h) {
    if (center.size() != v.size()) throw std::invalid_argument("grid oracle: dimension mismatch");
    if (center.empty() || center.size() > kGridOracleMaxDimension) {
        throw std::invalid_argument("grid oracle: dimension must be between 1 and 4");
    }
    if (!(h > 0.0) || h > 1.0) throw std::invalid_argument("grid oracle: step must lie in (0, 1]");
    const double inv = 1.0 / h;
    const long steps = std::lround(inv);
    if (std::abs(inv - static_cast<double>(steps)) > 1e-6 * inv) {
        throw std::invalid_argument("grid oracle: 1/h must be an integer");
    }
    if (kind == SetKind::None) {
        kind = SetKind::TV;
        radius = 0.0;
    }
    if (kind == SetKind::FiniteSet) throw std::invalid_argument("grid oracle: finite sets unsupported");

    const double best = GridSearch(center, v, radius, kind, steps).run();
    if (best == kInf) {
        throw std::domain_error("grid oracle: no grid point lies inside the ambiguity set");
    }
    return best;
}

} // namespace rmdp
