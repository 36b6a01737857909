#include "snrd/errors.hpp"
#include "snrd/semigroup.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

using namespace snrd;

namespace {

const Grid grid20(20.0, 200);

std::vector<std::function<double(double)>> smooth_family() {
    return {
        [](double x) { return x * std::exp(-x * x / 4.0); },
        [](double x) { return x * std::exp(-x * x); },
        [](double x) { return std::sin(0.8 * x) * std::exp(-x * x / 8.0); },
        [](double x) { return x * x * x * std::exp(-x * x / 2.0); },
    };
}

Field smooth_random(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> a(-1.0, 1.0);
    std::uniform_real_distribution<double> b(0.2, 3.0);
    std::uniform_real_distribution<double> c(0.5, 1.5);
    double ak[4];
    double bk[4];
    double ck[4];
    for (int k = 0; k < 4; ++k) {
        ak[k] = a(rng);
        bk[k] = b(rng);
        ck[k] = c(rng);
    }
    return Field::sample(g, [&](double x) {
        double v = 0.0;
        for (int k = 0; k < 4; ++k) {
            v += ak[k] * std::sin(bk[k] * x) * std::exp(-ck[k] * x);
        }
        return v;
    });
}

}  // namespace

TEST(ApplyS, IdentityAtZeroAndErrors) {
    const SemigroupParams p(1.0, grid20);
    std::mt19937_64 rng(2);
    const Field f = test::random_field(grid20, rng);
    EXPECT_EQ(apply_S(p, 0.0, f), f);
    EXPECT_THROW(apply_S(p, -0.1, f), ParameterError);
    EXPECT_THROW(SemigroupParams(0.0, grid20), ParameterError);
    EXPECT_EQ(apply_S(p, 1.0, f)[0], 0.0);
}

TEST(ApplyS, GaussianDerivativeOracle) {
    // u0 = x e^{-x^2/(4a)} evolves to e^{-mu t} (a/(a+t))^{3/2} x e^{-x^2/(4(a+t))}.
    const double a = 1.0;
    const double mu = 1.0;
    const double t = 0.5;
    const SemigroupParams p(mu, grid20);
    const Field u0 = Field::sample(grid20, [&](double x) { return x * std::exp(-x * x / (4.0 * a)); });
    const Field exact = Field::sample(grid20, [&](double x) {
        return std::exp(-mu * t) * std::pow(a / (a + t), 1.5) * x * std::exp(-x * x / (4.0 * (a + t)));
    });
    const Field got = apply_S(p, t, u0);
    EXPECT_LE(sup_norm(got - exact) / sup_norm(exact), 1e-4);
}

TEST(ApplyS, OddExtensionAgrees) {
    const DirichletSemigroup s(SemigroupParams(0.7, grid20));
    std::mt19937_64 rng(5);
    for (double t : {0.05, 0.5, 2.0}) {
        for (int i = 0; i < 5; ++i) {
            const Field f = test::random_field(grid20, rng, true);
            EXPECT_LE(sup_norm(s.apply(t, f) - s.apply_odd_extension(t, f)), 1e-10);
        }
    }
}

TEST(ApplyS, SemigroupLaw) {
    const SemigroupParams p(1.0, grid20);
    for (const auto& fn : smooth_family()) {
        const Field f = Field::sample(grid20, fn);
        for (double t : {0.1, 0.5, 1.0}) {
            for (double s : {0.1, 0.5, 1.0}) {
                EXPECT_LE(sup_norm(apply_S(p, t + s, f) - apply_S(p, t, apply_S(p, s, f))), 1e-6);
            }
        }
    }
}

TEST(ApplyS, StrongContinuityAtZero) {
    const SemigroupParams p(1.0, grid20);
    const Field f = Field::sample(grid20, [](double x) { return x * std::exp(-x); });
    double prev = 1e300;
    for (double t : {0.5, 0.1, 0.03, 0.01}) {
        const double d = sup_norm(apply_S(p, t, f) - f);
        EXPECT_LT(d, prev);
        prev = d;
    }
    EXPECT_LT(prev, 0.02);
}

TEST(ApplyS, DecayAndPositivity) {
    const SemigroupParams p(0.5, grid20);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 10; ++i) {
        const Field f = test::random_field(grid20, rng);
        double prev = sup_norm(f) * (1.0 + 1e-6);
        for (double t : {0.01, 0.1, 0.5, 1.0, 3.0}) {
            const double scaled = sup_norm(apply_S(p, t, f)) * std::exp(p.mu * t);
            EXPECT_LE(scaled, prev + 1e-6);
            prev = scaled;
        }
        const Field pos(grid20, f.values().cwiseAbs());
        EXPECT_GE(apply_S(p, 0.3, pos).values().minCoeff(), -1e-12);
    }
}

TEST(ApplyS, MinimumResolvedTime) {
    const DirichletSemigroup s(SemigroupParams(1.0, grid20));
    EXPECT_NEAR(s.min_resolved_time(), 0.005, 1e-15);
    EXPECT_TRUE(s.resolved(0.005));
    EXPECT_FALSE(s.resolved(0.004));
    EXPECT_TRUE(s.resolved(0.0));
}

TEST(SemigroupBounds, RandomFieldsHold) {
    std::mt19937_64 rng(13);
    const SemigroupParams p(1.0, grid20);
    for (int i = 0; i < 10; ++i) {
        const auto rep = check_semigroup_bounds(p, smooth_random(grid20, rng), 0.5);
        EXPECT_TRUE(rep.all_hold()) << rep.sup.ratio() << ' ' << rep.dx.ratio() << ' ' << rep.dxx.ratio() << ' '
                                    << rep.dt.ratio();
        EXPECT_TRUE(rep.resolved);
    }
}

TEST(SemigroupBounds, ZeroField) {
    const auto rep = check_semigroup_bounds(SemigroupParams(1.0, grid20), Field(grid20), 0.5);
    EXPECT_EQ(rep.sup.measured, 0.0);
    EXPECT_EQ(rep.dx.measured, 0.0);
    EXPECT_EQ(rep.dxx.measured, 0.0);
    EXPECT_EQ(rep.dt.measured, 0.0);
    EXPECT_TRUE(rep.all_hold());
}

TEST(SemigroupBounds, SmallTimeOnFineGrid) {
    const Grid g(20.0, 400);
    std::mt19937_64 rng(17);
    for (double mu : {0.5, 1.0, 2.0}) {
        const auto rep = check_semigroup_bounds(SemigroupParams(mu, g), smooth_random(g, rng), 1e-3);
        EXPECT_TRUE(rep.all_hold());
        EXPECT_DOUBLE_EQ(rep.slack, 1e-6 > g.dx() * g.dx() ? 1e-6 : g.dx() * g.dx());
    }
}

TEST(SemigroupBounds, RejectsNonPositiveTime) {
    const SemigroupParams p(1.0, grid20);
    EXPECT_THROW(check_semigroup_bounds(p, Field(grid20), 0.0), ParameterError);
    EXPECT_THROW(check_semigroup_bounds(p, Field(grid20), -1.0), ParameterError);
}
