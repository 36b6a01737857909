#pragma once

#include "snrd/grid.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace snrd {

/// Method-of-images Gaussian on the half-line with variance parameter
/// `spread` (alpha for the birth kernel, t for the heat kernel):
///   (4 pi s)^{-1/2} [exp(-(x-y)^2 / 4s) - exp(-(x+y)^2 / 4s)].
double image_kernel(double spread, double x, double y);

/// Closed form of int_0^L image_kernel(s, x, y) dy.
double image_kernel_mass(double spread, double x, double length);

/// Closed form of int_L^inf image_kernel(s, x, y) dy (mass lost to truncation).
double image_kernel_tail(double spread, double x, double length);

/// Dense quadrature for f -> int_0^L image_kernel(s, x_i, y) f(y) dy.
///
/// Trapezoid rule on the field's grid with the boundary value subtracted:
///   W f = f(0) * mass(x_i) + trapezoid[Gamma(x_i, .) (f - f(0))].
/// For fields with f(0) = 0 this is the plain trapezoid rule; constants are
/// integrated exactly. All weights are folded into one (N+1)^2 matrix.
class ImageKernelQuadrature {
public:
    ImageKernelQuadrature(const Grid& grid, double spread);

    const Grid& grid() const { return grid_; }
    double spread() const { return spread_; }
    const Eigen::MatrixXd& weights() const { return weights_; }

    Field apply(const Field& f) const;

private:
    Grid grid_;
    double spread_;
    Eigen::MatrixXd weights_;
};

struct KernelParams {
    double alpha;

    explicit KernelParams(double alpha_value);
};

/// Gamma(alpha, x, y) for x, y >= 0.
double kernel_value(const KernelParams& p, double x, double y);

/// The nonlocal operator K with its kernel matrix built once per (alpha, grid).
class NonlocalOperator {
public:
    NonlocalOperator(const KernelParams& p, const Grid& grid);

    const KernelParams& params() const { return params_; }
    const Grid& grid() const { return quadrature_.grid(); }
    const Eigen::MatrixXd& matrix() const { return quadrature_.weights(); }

    Field apply(const Field& f) const { return quadrature_.apply(f); }

    /// max over nodes x_i <= x_max of the Gaussian mass beyond L.
    double truncation_tail(double x_max) const;

private:
    KernelParams params_;
    ImageKernelQuadrature quadrature_;
};

Field apply_K(const KernelParams& p, const Field& f);

/// ||K f|| / ||f|| for each test field of estimate_operator_norm, in order.
std::vector<double> operator_norm_trials(const KernelParams& p, const Grid& grid, int trials, std::uint64_t seed);

/// max ||K f|| / ||f|| over `trials` test fields: the constant field first,
/// then random sign patterns and uniform samples. Deterministic in seed.
double estimate_operator_norm(const KernelParams& p, const Grid& grid, int trials, std::uint64_t seed);

}  // namespace snrd
