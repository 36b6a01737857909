#include "snrd/errors.hpp"
#include "snrd/kernel.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace snrd;

namespace {

// Direct two-Gaussian formula, no cancellation handling.
double gamma_direct(double a, double x, double y) {
    return (std::exp(-(x - y) * (x - y) / (4.0 * a)) - std::exp(-(x + y) * (x + y) / (4.0 * a))) /
           std::sqrt(4.0 * std::numbers::pi * a);
}

// Composite Simpson on [0, L] with m panels.
template <class F>
double simpson(F f, double a, double b, int m) {
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) {
        s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
    }
    return s * h / 3.0;
}

}  // namespace

TEST(KernelValue, Examples) {
    const KernelParams p(1.0);
    EXPECT_EQ(kernel_value(p, 0.0, 5.0), 0.0);
    EXPECT_EQ(kernel_value(p, 5.0, 0.0), 0.0);
    EXPECT_NEAR(kernel_value(p, 1.0, 1.0), (1.0 - std::exp(-1.0)) / std::sqrt(4.0 * std::numbers::pi), 1e-16);
    EXPECT_NEAR(kernel_value(p, 1.0, 1.0), 0.17831791741872946, 1e-16);
    EXPECT_EQ(kernel_value(p, 2.0, 3.0), kernel_value(p, 3.0, 2.0));
}

TEST(KernelValue, RejectsNegativeArguments) {
    const KernelParams p(1.0);
    EXPECT_THROW(kernel_value(p, -0.1, 1.0), ParameterError);
    EXPECT_THROW(kernel_value(p, 1.0, -0.1), ParameterError);
    EXPECT_THROW(KernelParams(0.0), ParameterError);
    EXPECT_THROW(KernelParams(-1.0), ParameterError);
}

TEST(KernelValue, PropertiesOnRandomPairs) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 15.0);
    std::uniform_real_distribution<double> la(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const KernelParams p(std::exp(la(rng)));
        const double x = u(rng);
        const double y = u(rng);
        const double v = kernel_value(p, x, y);
        EXPECT_GE(v, 0.0);
        EXPECT_EQ(v, kernel_value(p, y, x));
        EXPECT_NEAR(v, gamma_direct(p.alpha, x, y), 1e-13);
    }
}

TEST(KernelMass, MatchesNumericalIntegral) {
    for (double a : {0.25, 1.0, 4.0}) {
        for (double x : {0.0, 0.3, 2.0, 7.5, 19.0}) {
            const double num = simpson([&](double y) { return gamma_direct(a, x, y); }, 0.0, 20.0, 20000);
            EXPECT_NEAR(image_kernel_mass(a, x, 20.0), num, 1e-10);
        }
    }
}

TEST(ApplyK, ZeroAndBoundary) {
    const Grid g(20.0, 200);
    const KernelParams p(1.0);
    EXPECT_EQ(sup_norm(apply_K(p, Field(g))), 0.0);
    std::mt19937_64 rng(1);
    EXPECT_EQ(apply_K(p, test::random_field(g, rng))[0], 0.0);
}

TEST(ApplyK, ConstantGivesErf) {
    // L = 40: Gaussian mass beyond L is below 1e-12 for x <= 20 and alpha <= 4.
    const Grid g(40.0, 400);
    for (double a : {0.25, 1.0, 4.0}) {
        const Field r = apply_K(KernelParams(a), Field::constant(g, 1.0));
        for (int i = 0; i < g.size() && g.node(i) <= 20.0; ++i) {
            EXPECT_NEAR(r[i], std::erf(g.node(i) / (2.0 * std::sqrt(a))), 1e-6) << "alpha " << a << " x " << g.node(i);
        }
    }
}

TEST(ApplyK, AgreesWithFineQuadratureOracle) {
    const Grid g(20.0, 200);
    const KernelParams p(1.0);
    auto f = [](double y) { return y * std::exp(-y * y / 8.0) + std::sin(y) * std::exp(-y); };
    const Field r = apply_K(p, Field::sample(g, f));
    for (int i = 0; i < g.size(); i += 17) {
        const double x = g.node(i);
        const double ref = simpson([&](double y) { return gamma_direct(1.0, x, y) * f(y); }, 0.0, 20.0, 40000);
        EXPECT_NEAR(r[i], ref, 1e-6) << x;
    }
}

TEST(ApplyK, Linearity) {
    const Grid g(20.0, 200);
    const NonlocalOperator k(KernelParams(0.5), g);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const Field f = test::random_field(g, rng);
        const Field h = test::random_field(g, rng);
        const double a = u(rng);
        const double b = u(rng);
        const Field lhs = k.apply(a * f + b * h);
        const Field rhs = a * k.apply(f) + b * k.apply(h);
        EXPECT_LE(sup_norm(lhs - rhs), 1e-13);
    }
}

TEST(ApplyK, NormBoundOnRandomFields) {
    const Grid g(20.0, 200);
    std::mt19937_64 rng(11);
    for (double a : {0.25, 1.0, 4.0}) {
        const NonlocalOperator k(KernelParams(a), g);
        for (int i = 0; i < 100; ++i) {
            const Field f = test::random_field(g, rng);
            EXPECT_LE(sup_norm(k.apply(f)), sup_norm(f) + 1e-8);
        }
    }
}

TEST(ApplyK, SecondOrderInDx) {
    // Dirichlet data: halving dx reduces the change by about 4.
    const KernelParams p(1.0);
    auto f = [](double y) { return y * std::exp(-y); };
    auto at_one = [&](int n) {
        const Grid g(20.0, n);
        return apply_K(p, Field::sample(g, f))[n / 20];
    };
    const double e1 = std::abs(at_one(50) - at_one(800));
    const double e2 = std::abs(at_one(100) - at_one(800));
    EXPECT_GT(e1 / e2, 3.0);
}

TEST(ApplyK, TruncationTail) {
    const NonlocalOperator k(KernelParams(1.0), Grid(20.0, 200));
    EXPECT_LT(k.truncation_tail(10.0), 1e-10);
}

TEST(OperatorNorm, Examples) {
    const Grid g(20.0, 200);
    const KernelParams p(1.0);
    // Constant field only: max_x K1(x) sits just below erf(L / (2 sqrt(alpha))).
    const double single = estimate_operator_norm(p, g, 1, 5);
    EXPECT_LT(single, 1.0);
    EXPECT_LE(single, std::erf(20.0 / 2.0));
    EXPECT_GT(single, std::erf(20.0 / 2.0) - 1e-10);
    for (std::uint64_t seed : {1u, 2u, 99u}) {
        const double v = estimate_operator_norm(p, g, 100, seed);
        EXPECT_GT(v, 0.0);
        EXPECT_LE(v, 1.0 + 1e-8);
    }
    EXPECT_EQ(estimate_operator_norm(p, g, 50, 4), estimate_operator_norm(p, g, 50, 4));
    EXPECT_THROW(estimate_operator_norm(p, g, 0, 1), ParameterError);
}
