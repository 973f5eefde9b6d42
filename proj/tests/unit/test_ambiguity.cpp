#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "rmdp/ambiguity.hpp"
#include "support/generators.hpp"

namespace rmdp {
namespace {

using testing::Gen;
using Vec = std::vector<double>;

// mpmath, 30 digits: 0.5 - sqrt(0.125) and the root p < 0.5 of
// p log(2p) + (1-p) log(2(1-p)) = 0.1.
constexpr double kChi2Example = 0.14644660940672623780;
constexpr double kKlExample = 0.28020537383859026878;

void expect_feasible(SetKind kind, const Vec& center, const Vec& v, double radius,
                     const SigmaResult& r) {
    ASSERT_EQ(r.worst_case.size(), center.size());
    double total = 0.0;
    for (double p : r.worst_case) {
        EXPECT_GE(p, 0.0);
        total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_LE(divergence(kind, r.worst_case, center), radius + kWorstCaseSlack);
    EXPECT_LE(dot(r.worst_case, v), r.value + 1e-8);
}

// Threshold form of the TV dual:
// max over omega of E[min(v, omega)] - c (max min(v, omega) - min min(v, omega)),
// piecewise linear in omega, so the breakpoints suffice. Valid for v >= 0.
double tv_mu_dual(const Vec& center, const Vec& v, double radius) {
    double best = -1e300;
    const double vmin = *std::min_element(v.begin(), v.end());
    const double vmax = *std::max_element(v.begin(), v.end());
    for (double omega : v) {
        double e = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) e += center[i] * std::min(v[i], omega);
        best = std::max(best, e - radius * (std::min(vmax, omega) - std::min(vmin, omega)));
    }
    return best;
}

TEST(SigmaTv, Examples) {
    auto r0 = sigma_tv(Vec{0.5, 0.5}, Vec{1, 3}, 0.0);
    EXPECT_DOUBLE_EQ(r0.value, 2.0);
    EXPECT_EQ(r0.worst_case, (Vec{0.5, 0.5}));

    auto r1 = sigma_tv(Vec{0.5, 0.5}, Vec{1, 3}, 1.0);
    EXPECT_DOUBLE_EQ(r1.value, 1.0);
    EXPECT_EQ(r1.worst_case, (Vec{1.0, 0.0}));

    auto r2 = sigma_tv(Vec{0.5, 0.5}, Vec{0, 1}, 0.2);
    EXPECT_NEAR(r2.value, 0.3, 1e-15);
    EXPECT_NEAR(r2.worst_case[0], 0.7, 1e-15);
    EXPECT_NEAR(r2.worst_case[1], 0.3, 1e-15);
}

TEST(SigmaTv, MassLandsOffSupportOnGlobalArgmin) {
    auto r = sigma_tv(Vec{0.0, 1.0, 0.0}, Vec{2.0, 5.0, -1.0}, 0.25);
    EXPECT_DOUBLE_EQ(r.value, 0.75 * 5.0 - 0.25);
    EXPECT_EQ(r.worst_case, (Vec{0.0, 0.75, 0.25}));
}

TEST(SigmaTv, TiesGoToLowestIndex) {
    auto r = sigma_tv(Vec{0.2, 0.6, 0.2}, Vec{0.0, 1.0, 0.0}, 0.1);
    EXPECT_NEAR(r.worst_case[0], 0.3, 1e-15);
    EXPECT_NEAR(r.worst_case[2], 0.2, 1e-15);
}

TEST(SigmaTv, AgreesWithMuDual) {
    Gen gen(101);
    for (int i = 0; i < 500; ++i) {
        const std::size_t n = gen.between(2, 7);
        Vec center = gen.simplex(n);
        Vec v = gen.values(n, 0.0, 10.0);
        const double radius = gen.uniform(0.0, 1.0);
        ASSERT_NEAR(sigma_tv(center, v, radius).value, tv_mu_dual(center, v, radius), 1e-12);
    }
}

TEST(SigmaChi2, Examples) {
    EXPECT_DOUBLE_EQ(sigma_chi2(Vec{0.5, 0.5}, Vec{0, 1}, 0.0).value, 0.5);
    EXPECT_NEAR(sigma_chi2(Vec{0.2, 0.3, 0.5}, Vec{4, 4, 4}, 0.7).value, 4.0, 1e-12);

    auto r = sigma_chi2(Vec{0.5, 0.5}, Vec{0, 1}, 0.5);
    EXPECT_NEAR(r.value, kChi2Example, 1e-10);
    expect_feasible(SetKind::Chi2, {0.5, 0.5}, {0, 1}, 0.5, r);
}

TEST(SigmaChi2, LargeRadiusReachesSupportMinimum) {
    auto r = sigma_chi2(Vec{0.3, 0.7, 0.0}, Vec{2.0, 5.0, -9.0}, 50.0);
    EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(SigmaChi2, ConstantValuesKeepCenter) {
    Vec center{0.25, 0.25, 0.5};
    auto r = sigma_chi2(center, Vec{3, 3, 3}, 0.4);
    EXPECT_NEAR(r.value, 3.0, 1e-12);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.worst_case[i], center[i], 1e-12);
}

TEST(SigmaKl, Examples) {
    EXPECT_NEAR(sigma_kl(Vec{0.5, 0.5}, Vec{3, 3}, 0.1).value, 3.0, 1e-12);
    EXPECT_DOUBLE_EQ(sigma_kl(Vec{1, 0}, Vec{2, 0}, 0.5).value, 2.0);

    auto r = sigma_kl(Vec{0.5, 0.5}, Vec{0, 1}, 0.1);
    EXPECT_NEAR(r.value, kKlExample, 1e-9);
    expect_feasible(SetKind::KL, {0.5, 0.5}, {0, 1}, 0.1, r);
    EXPECT_GT(r.dual, 0.0);
}

TEST(SigmaKl, RejectsNonPositiveRadius) {
    EXPECT_THROW(sigma_kl(Vec{0.5, 0.5}, Vec{0, 1}, 0.0), std::invalid_argument);
    EXPECT_THROW(sigma_kl(Vec{0.5, 0.5}, Vec{0, 1}, -1.0), std::invalid_argument);
}

TEST(SigmaKl, ZeroRadiusIsExpectation) {
    EXPECT_DOUBLE_EQ(sigma_kl_zero_radius(Vec{0.5, 0.5}, Vec{0, 1}).value, 0.5);
    EXPECT_DOUBLE_EQ(sigma_kl_zero_radius(Vec{1, 0}, Vec{7, -3}).value, 7.0);
    EXPECT_NEAR(sigma_kl_zero_radius(Vec{0.2, 0.3, 0.5}, Vec{1, 2, 3}).value, 2.3, 1e-15);
    EXPECT_NEAR(sigma(SetKind::KL, Vec{0.2, 0.3, 0.5}, Vec{1, 2, 3}, 0.0).value, 2.3, 1e-15);
}

TEST(SigmaKl, LargeRadiusHitsSupportMinimumLimit) {
    // -log(0.5) < 5, so the point mass on the support argmin is feasible.
    auto r = sigma_kl(Vec{0.5, 0.5, 0.0}, Vec{1.0, 4.0, -2.0}, 5.0);
    EXPECT_NEAR(r.value, 1.0, 1e-9);
    EXPECT_NEAR(r.worst_case[0], 1.0, 1e-9);
    EXPECT_EQ(r.worst_case[2], 0.0);
}

TEST(SigmaKl, DualIsUnimodalOnItsInterval) {
    Gen gen(7);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = gen.between(2, 6);
        Vec center = gen.simplex(n);
        Vec v = gen.values(n);
        const double radius = gen.uniform(0.01, 2.0);
        double lo = 1e300, hi = -1e300;
        for (std::size_t j = 0; j < n; ++j) {
            if (center[j] > 0) {
                lo = std::min(lo, v[j]);
                hi = std::max(hi, v[j]);
            }
        }
        const double top = std::max(hi - lo, 1e-12) / radius;
        std::vector<double> g;
        for (int k = 1; k <= 100; ++k) g.push_back(kl_dual_objective(center, v, radius, top * k / 100.0));
        for (std::size_t k = 1; k + 1 < g.size(); ++k) {
            const bool strict_local_min = g[k] < g[k - 1] - 1e-12 && g[k] < g[k + 1] - 1e-12;
            ASSERT_FALSE(strict_local_min) << "case " << i << " at " << k;
        }
        // The solver's value dominates every sampled dual point.
        const double value = sigma_kl(center, v, radius).value;
        for (double x : g) ASSERT_LE(x, value + 1e-9);
    }
}

TEST(SigmaFinite, Examples) {
    Vec a{1, 0}, b{0, 1};
    std::vector<std::span<const double>> models{a, b};
    auto r = sigma_finite_set(models, Vec{2, 5});
    EXPECT_DOUBLE_EQ(r.value, 2.0);
    EXPECT_EQ(r.worst_case, a);

    std::vector<std::span<const double>> single{b};
    EXPECT_DOUBLE_EQ(sigma_finite_set(single, Vec{2, 5}).value, 5.0);

    Vec c{0.5, 0.5}, d{0.9, 0.1};
    std::vector<std::span<const double>> two{c, d};
    auto r2 = sigma_finite_set(two, Vec{0, 1});
    EXPECT_NEAR(r2.value, 0.1, 1e-15);
    EXPECT_EQ(r2.dual, 1.0);

    std::vector<std::span<const double>> tied{c, c};
    EXPECT_EQ(sigma_finite_set(tied, Vec{0, 1}).dual, 0.0);
    EXPECT_THROW(sigma_finite_set({}, Vec{0, 1}), std::invalid_argument);
}

TEST(Sigma, DimensionMismatchThrows) {
    EXPECT_THROW(sigma_tv(Vec{0.5, 0.5}, Vec{1}, 0.1), std::invalid_argument);
    EXPECT_THROW(sigma_chi2(Vec{0.5, 0.5}, Vec{1}, 0.1), std::invalid_argument);
    EXPECT_THROW(sigma_kl(Vec{0.5, 0.5}, Vec{1}, 0.1), std::invalid_argument);
}

TEST(GridOracle, Examples) {
    EXPECT_NEAR(sigma_grid_oracle(Vec{0.5, 0.5}, Vec{0, 1}, 0.2, SetKind::TV, 1e-4), 0.3, 2e-4);
    EXPECT_NEAR(sigma_grid_oracle(Vec{0.5, 0.5}, Vec{0, 1}, 0.5, SetKind::Chi2, 1e-4), kChi2Example, 5e-4);
    EXPECT_NEAR(sigma_grid_oracle(Vec{0.5, 0.5}, Vec{0, 1}, 0.1, SetKind::KL, 1e-4), kKlExample, 5e-4);
}

TEST(GridOracle, RejectsBadArguments) {
    EXPECT_THROW(sigma_grid_oracle(Vec(5, 0.2), Vec(5, 0.0), 0.1, SetKind::TV, 0.1), std::invalid_argument);
    EXPECT_THROW(sigma_grid_oracle(Vec{0.5, 0.5}, Vec{0, 1}, 0.1, SetKind::TV, 0.0), std::invalid_argument);
    EXPECT_THROW(sigma_grid_oracle(Vec{0.5, 0.5}, Vec{0, 1}, 0.1, SetKind::TV, 0.3), std::invalid_argument);
    EXPECT_THROW(sigma_grid_oracle(Vec{0.5, 0.5}, Vec{0, 1}, 0.1, SetKind::FiniteSet, 0.1),
                 std::invalid_argument);
    // No grid point lies within KL 1e-9 of an off-grid center.
    EXPECT_THROW(sigma_grid_oracle(Vec{1.0 / 3, 2.0 / 3}, Vec{0, 1}, 1e-9, SetKind::KL, 0.1),
                 std::domain_error);
}

TEST(GridOracle, LineSearchMatchesFullEnumeration) {
    // Full enumeration on a coarse grid, three states.
    Gen gen(5);
    for (SetKind kind : {SetKind::TV, SetKind::Chi2, SetKind::KL}) {
        for (int i = 0; i < 100; ++i) {
            Vec center = gen.grid_simplex(3, 20);
            Vec v = gen.values(3);
            const double radius = gen.uniform(0.01, 0.6);
            const long m = 40;
            double best = 1e300;
            for (long a = 0; a <= m; ++a) {
                for (long b = 0; a + b <= m; ++b) {
                    Vec p{double(a) / m, double(b) / m, double(m - a - b) / m};
                    if (divergence(kind, p, center) <= radius) best = std::min(best, dot(p, v));
                }
            }
            ASSERT_DOUBLE_EQ(sigma_grid_oracle(center, v, radius, kind, 1.0 / m), best)
                << to_string(kind) << " case " << i;
        }
    }
}

// Worst-case distributions are feasible and attain the value.
TEST(SigmaProperties, WorstCaseFeasibility) {
    Gen gen(2024);
    for (SetKind kind : {SetKind::TV, SetKind::Chi2, SetKind::KL}) {
        for (int i = 0; i < 500; ++i) {
            const std::size_t n = gen.between(2, 6);
            Vec center = gen.simplex(n);
            Vec v = gen.values(n);
            const double radius = gen.uniform(kind == SetKind::KL ? 0.001 : 0.0, 1.5);
            auto r = sigma(kind, center, v, radius);
            SCOPED_TRACE(std::string(to_string(kind)) + " case " + std::to_string(i));
            expect_feasible(kind, center, v, radius, r);
        }
    }
}

// Small-count version of the fuzz suite; the acceptance binary runs the full one.
TEST(SigmaProperties, SandwichMonotoneAndTranslation) {
    Gen gen(99);
    for (SetKind kind : {SetKind::TV, SetKind::Chi2, SetKind::KL, SetKind::FiniteSet}) {
        for (int i = 0; i < 200; ++i) {
            const std::size_t n = gen.between(2, 6);
            Vec center = gen.simplex(n);
            Vec other = gen.simplex(n);
            Vec v = gen.values(n);
            const double radius = gen.uniform(0.0, 1.0);
            auto eval = [&](const Vec& w, double c) {
                if (kind == SetKind::FiniteSet) {
                    std::vector<std::span<const double>> models{center, other};
                    return sigma_finite_set(models, w).value;
                }
                return sigma_value(kind, center, w, c);
            };
            const double s = eval(v, radius);
            ASSERT_GE(s, *std::min_element(v.begin(), v.end()) - 1e-10);
            ASSERT_LE(s, dot(center, v) + 1e-10);

            Vec up = v;
            for (auto& x : up) x += gen.uniform(0.0, 1.0);
            ASSERT_LE(s, eval(up, radius) + 1e-10);

            const double t = gen.uniform(-3.0, 3.0);
            Vec shifted = v;
            for (auto& x : shifted) x += t;
            ASSERT_NEAR(eval(shifted, radius), s + t, 1e-8);
        }
    }
}

} // namespace
} // namespace rmdp
