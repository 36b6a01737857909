#include "snrd/kernel.hpp"

#include "snrd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace snrd {

double image_kernel(double spread, double x, double y) {
    const double d = x - y;
    // exp(-(x+y)^2/4s) = exp(-(x-y)^2/4s) * exp(-xy/s)
    return std::exp(-d * d / (4.0 * spread)) * -std::expm1(-x * y / spread) /
           std::sqrt(4.0 * std::numbers::pi * spread);
}

double image_kernel_mass(double spread, double x, double length) {
    const double r = 2.0 * std::sqrt(spread);
    return std::erf(x / r) - 0.5 * (std::erfc((length - x) / r) - std::erfc((length + x) / r));
}

double image_kernel_tail(double spread, double x, double length) {
    const double r = 2.0 * std::sqrt(spread);
    return 0.5 * (std::erfc((length - x) / r) - std::erfc((length + x) / r));
}

ImageKernelQuadrature::ImageKernelQuadrature(const Grid& grid, double spread)
    : grid_(grid), spread_(spread), weights_(Eigen::MatrixXd::Zero(grid.size(), grid.size())) {
    detail::require(std::isfinite(spread) && spread > 0.0, "image kernel: spread must be positive");
    const int n = grid.size();
    const double h = grid.dx();
    for (int i = 1; i < n; ++i) {
        const double x = grid.node(i);
        double row = 0.0;
        for (int j = 1; j < n; ++j) {
            const double w = (j == n - 1 ? 0.5 : 1.0) * h * image_kernel(spread, x, grid.node(j));
            weights_(i, j) = w;
            row += w;
        }
        weights_(i, 0) = image_kernel_mass(spread, x, grid.length()) - row;
    }
}

Field ImageKernelQuadrature::apply(const Field& f) const {
    detail::require(f.grid() == grid_, "image kernel: field grid mismatch");
    return Field(grid_, weights_ * f.values());
}

KernelParams::KernelParams(double alpha_value) : alpha(alpha_value) {
    detail::require(std::isfinite(alpha) && alpha > 0.0, "alpha must be positive and finite");
}

double kernel_value(const KernelParams& p, double x, double y) {
    detail::require(x >= 0.0 && y >= 0.0, "kernel: x and y must be non-negative");
    return image_kernel(p.alpha, x, y);
}

NonlocalOperator::NonlocalOperator(const KernelParams& p, const Grid& grid)
    : params_(p), quadrature_(grid, p.alpha) {}

double NonlocalOperator::truncation_tail(double x_max) const {
    const Grid& g = grid();
    double m = 0.0;
    for (int i = 0; i <= g.last_node_at_or_below(x_max); ++i) {
        m = std::max(m, image_kernel_tail(params_.alpha, g.node(i), g.length()));
    }
    return m;
}

Field apply_K(const KernelParams& p, const Field& f) { return NonlocalOperator(p, f.grid()).apply(f); }

std::vector<double> operator_norm_trials(const KernelParams& p, const Grid& grid, int trials, std::uint64_t seed) {
    detail::require(trials >= 1, "operator norm: trials must be at least 1");
    const NonlocalOperator k(p, grid);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::bernoulli_distribution coin(0.5);

    std::vector<double> ratios(static_cast<std::size_t>(trials), 0.0);
    for (int trial = 0; trial < trials; ++trial) {
        Eigen::VectorXd v(grid.size());
        if (trial == 0) {
            v.setOnes();
        } else if (trial % 2 == 1) {
            for (int i = 0; i < v.size(); ++i) {
                v[i] = coin(rng) ? 1.0 : -1.0;
            }
        } else {
            for (int i = 0; i < v.size(); ++i) {
                v[i] = unif(rng);
            }
        }
        const Field f(grid, std::move(v));
        const double denom = sup_norm(f);
        if (denom > 0.0) {
            ratios[static_cast<std::size_t>(trial)] = sup_norm(k.apply(f)) / denom;
        }
    }
    return ratios;
}

double estimate_operator_norm(const KernelParams& p, const Grid& grid, int trials, std::uint64_t seed) {
    const auto ratios = operator_norm_trials(p, grid, trials, seed);
    return *std::max_element(ratios.begin(), ratios.end());
}

}  // namespace snrd
