#include "snrd/errors.hpp"
#include "snrd/noise.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>

using namespace snrd;

namespace {

WienerPath linear_path(double slope, long first, long last, double dt) {
    std::vector<double> v;
    for (long k = first; k <= last; ++k) {
        v.push_back(slope * static_cast<double>(k) * dt);
    }
    return WienerPath(dt, first, {v});
}

}  // namespace

TEST(Wiener, ZeroAtOriginAndWindow) {
    const WienerPath w = sample_wiener(2, -3.0, 2.0, 0.1, 7);
    EXPECT_EQ(w.components(), 2);
    EXPECT_EQ(w.knot(0, 0), 0.0);
    EXPECT_EQ(w.knot(1, 0), 0.0);
    EXPECT_LE(w.t_lo(), -3.0 + 1e-12);
    EXPECT_GE(w.t_hi(), 2.0 - 1e-12);
    EXPECT_EQ(w.value(0, 0.0), 0.0);
}

TEST(Wiener, DeterministicPerSeed) {
    const WienerPath a = sample_wiener(2, -5.0, 5.0, 0.05, 42);
    const WienerPath b = sample_wiener(2, -5.0, 5.0, 0.05, 42);
    const WienerPath c = sample_wiener(2, -5.0, 5.0, 0.05, 43);
    EXPECT_TRUE(a == b);
    EXPECT_FALSE(a == c);
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        seeds.insert(ensemble_seed(42, i));
    }
    EXPECT_EQ(seeds.size(), 1000u);
    EXPECT_EQ(ensemble_seed(42, 3), ensemble_seed(42, 3));
}

TEST(Wiener, IncrementVariance) {
    const double dt = 0.01;
    const WienerPath w = sample_wiener(1, -500.0, 500.0, dt, 11);
    double pos = 0.0;
    double neg = 0.0;
    long n = 0;
    for (long k = 0; k < w.knot_hi(); ++k, ++n) {
        const double d = w.increment(0, k, k + 1);
        pos += d * d;
        const double e = w.increment(0, -k - 1, -k);
        neg += e * e;
    }
    EXPECT_NEAR(pos / n / dt, 1.0, 0.02);
    EXPECT_NEAR(neg / n / dt, 1.0, 0.02);
}

TEST(Wiener, InterpolationAndCoarsen) {
    const WienerPath w = sample_wiener(1, -2.0, 2.0, 0.1, 5);
    EXPECT_NEAR(w.value(0, 0.35), 0.5 * (w.knot(0, 3) + w.knot(0, 4)), 1e-15);
    const WienerPath c = w.coarsen(2);
    EXPECT_DOUBLE_EQ(c.dt(), 0.2);
    for (long k = c.knot_lo(); k <= c.knot_hi(); ++k) {
        EXPECT_EQ(c.knot(0, k), w.knot(0, 2 * k));
    }
}

TEST(Wiener, ShiftIdentities) {
    const WienerPath w = sample_wiener(2, -10.0, 10.0, 0.1, 9);
    EXPECT_TRUE(w.shift(0.3).shift(0.5) == w.shift(0.8));
    EXPECT_TRUE(w.shift(-1.2).shift(1.2) == w);
    const WienerPath s = w.shift(0.7);
    for (long k = -20; k <= 20; ++k) {
        EXPECT_NEAR(s.knot(1, k), w.knot(1, k + 7) - w.knot(1, 7), 1e-14);
    }
    EXPECT_THROW(w.shift(15.0), WindowExhausted);
    EXPECT_THROW(w.shift(0.05), ParameterError);
}

TEST(Wiener, RejectsBadConstruction) {
    EXPECT_THROW(WienerPath(0.1, 0, {{1.0, 2.0}}), ParameterError);
    EXPECT_THROW(WienerPath(0.1, 1, {{0.0}}), ParameterError);
    EXPECT_THROW(sample_wiener(0, -1.0, 1.0, 0.1, 1), ParameterError);
    EXPECT_THROW(sample_wiener(1, 0.5, 1.0, 0.1, 1), ParameterError);
    EXPECT_THROW(WienerPath::zero(1, -1.0, 1.0, -0.1), ParameterError);
}

TEST(Wiener, CsvLayout) {
    const WienerPath w = sample_wiener(2, -0.3, 0.2, 0.1, 1);
    std::ostringstream out;
    write_path_csv(out, w);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,w_1,w_2");
    long rows = 0;
    while (std::getline(in, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, w.knot_hi() - w.knot_lo() + 1);
}

TEST(OU, ParamsValidation) {
    EXPECT_THROW(OUParams(0.0), ParameterError);
    EXPECT_THROW(OUParams(1.0, 10.0), ParameterError);
    EXPECT_NO_THROW(OUParams(1.0, 40.0));
    EXPECT_NEAR(OUParams(2.0).s_cut, 20.0, 1e-15);
}

TEST(OU, ZeroPathGivesZero) {
    const WienerPath w = WienerPath::zero(1, -50.0, 5.0, 0.01);
    const OUKernel ou(OUParams(1.0), 0.01);
    EXPECT_EQ(ou.at(w, 0, 0.0), 0.0);
    EXPECT_EQ(ou.at(w, 0, 3.0), 0.0);
    EXPECT_EQ(tempered_bound(w, ou, -5.0, 5.0), 0.0);
    EXPECT_EQ(ou_sde_residual(w, 0, ou, 0.0, 1.0), 0.0);
}

TEST(OU, LinearPathOracle) {
    // omega(t) = a t gives the stationary solution z = a / mu.
    const double a = 0.7;
    const double dt = 0.01;
    for (double mu : {0.5, 1.0, 3.0}) {
        const OUParams p(mu);
        const WienerPath w = linear_path(a, -static_cast<long>(std::ceil(p.s_cut / dt)) - 10, 10, dt);
        EXPECT_NEAR(ou_value(w, 0, p, 0.0), a / mu, 1e-4);
    }
}

TEST(OU, WindowExhausted) {
    const WienerPath w = sample_wiener(1, -10.0, 1.0, 0.01, 3);
    EXPECT_THROW(ou_value(w, 0, OUParams(1.0), 0.0), WindowExhausted);
    const OUKernel ou(OUParams(1.0), 0.02);
    EXPECT_THROW(ou.at_knot(w, 0, 0), ParameterError);
}

TEST(OU, ShiftIdentityBitwise) {
    const WienerPath w = sample_wiener(2, -60.0, 20.0, 0.01, 21);
    const OUKernel ou(OUParams(1.0), 0.01);
    for (double t : {0.0, 0.37, 5.0, 12.5, -3.21}) {
        const WienerPath s = w.shift(t);
        for (int j = 0; j < 2; ++j) {
            EXPECT_EQ(ou.at(w, j, t), ou.at(s, j, 0.0));
        }
    }
}

TEST(OU, StationaryVariance) {
    const double mu = 1.0;
    const OUKernel ou(OUParams(mu), 0.01);
    const int paths = 2000;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < paths; ++i) {
        const WienerPath w = sample_wiener(1, -41.0, 0.1, 0.01, ensemble_seed(77, i));
        const double z = ou.at_knot(w, 0, 0);
        sum += z;
        sq += z * z;
    }
    const double mean = sum / paths;
    const double var = sq / paths - mean * mean;
    EXPECT_NEAR(mean, 0.0, 0.06);
    EXPECT_NEAR(var, 1.0 / (2.0 * mu), 0.06);
}

TEST(OU, SdeResidualSmall) {
    const WienerPath w = sample_wiener(1, -45.0, 2.0, 0.01, 31);
    const OUKernel fine(OUParams(1.0), 0.01);
    const OUKernel coarse(OUParams(1.0), 0.02);
    const double r1 = ou_sde_residual(w, 0, fine, 0.0, 1.0);
    const double r2 = ou_sde_residual(w.coarsen(2), 0, coarse, 0.0, 1.0);
    EXPECT_LE(r1, 10.0 * 0.01);
    EXPECT_LE(r2, 10.0 * 0.02);
}

TEST(OU, TemperednessDecays) {
    const OUParams p(1.0);
    for (std::uint64_t i = 0; i < 5; ++i) {
        const WienerPath w = sample_wiener(1, -245.0, 0.1, 0.1, ensemble_seed(3, i));
        const auto samples = temperedness_diagnostic(w, p, 0.1, 200.0);
        ASSERT_FALSE(samples.empty());
        EXPECT_EQ(samples.front().t, 0.0);
        EXPECT_NEAR(samples.back().t, 200.0, 1e-9);
        EXPECT_LT(samples.back().value, 1e-3);
        for (const auto& s : samples) {
            EXPECT_GE(s.value, 0.0);
        }
    }
    const WienerPath w = sample_wiener(1, -50.0, 0.1, 0.1, 1);
    EXPECT_THROW(temperedness_diagnostic(w, p, 0.0, 1.0), ParameterError);
}

TEST(OU, TemperedBoundDominatesSize) {
    const WienerPath w = sample_wiener(2, -50.0, 10.0, 0.05, 8);
    const OUKernel ou(OUParams(1.0), 0.05);
    const double r = tempered_bound(w, ou, -5.0, 5.0);
    for (double t = -5.0; t <= 5.0; t += 0.5) {
        const auto z = ou.all_at_knot(w, w.knot_of(t));
        const double s = z[0] * z[0] + z[1] * z[1];
        EXPECT_LE(std::exp(-0.5 * std::abs(t)) * std::sqrt(s), r * (1.0 + 1e-12));
        EXPECT_LE(std::exp(-0.5 * std::abs(t)) * s, r * (1.0 + 1e-12));
    }
}

TEST(Profiles, SecondDerivativeMatchesFiniteDifference) {
    const NoiseProfiles all{{ProfileKind::quadratic_exp, 1.3, 20.0},
                            {ProfileKind::gaussian_odd, 0.8, 20.0},
                            {ProfileKind::sine_exp, 1.0, 12.0}};
    const double h = 1e-4;
    for (const auto& p : all) {
        EXPECT_EQ(p.value(0.0), 0.0);
        for (double x = 0.25; x < 10.0; x += 0.37) {
            const double fd = (p.value(x + h) - 2.0 * p.value(x) + p.value(x - h)) / (h * h);
            EXPECT_NEAR(p.second_derivative(x), fd, 1e-6) << static_cast<int>(p.kind) << ' ' << x;
        }
    }
}

TEST(Profiles, FieldsCombineLinearly) {
    const Grid g(10.0, 50);
    const NoiseProfiles ps{{ProfileKind::quadratic_exp, 1.0, 10.0}, {ProfileKind::gaussian_odd, 2.0, 10.0}};
    const std::vector<double> z{0.5, -1.5};
    const Field f = noise_field(ps, z, g);
    const Field l = laplacian_noise_field(ps, z, g);
    for (int i = 0; i < g.size(); ++i) {
        const double x = g.node(i);
        EXPECT_NEAR(f[i], 0.5 * ps[0].value(x) - 1.5 * ps[1].value(x), 1e-15);
        EXPECT_NEAR(l[i], 0.5 * ps[0].second_derivative(x) - 1.5 * ps[1].second_derivative(x), 1e-14);
    }
    EXPECT_THROW(noise_field(ps, std::vector<double>{1.0}, g), ParameterError);
}
