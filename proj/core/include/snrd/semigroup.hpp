#pragma once

#include "snrd/grid.hpp"

#include <Eigen/Core>

namespace snrd {

struct SemigroupParams {
    double mu;
    Grid grid;

    SemigroupParams(double mu_value, const Grid& grid_value);
};

/// S(t) generated by Delta - mu with u(t, 0) = 0 on the half-line, realized
/// through the method-of-images heat kernel on [0, L].
class DirichletSemigroup {
public:
    explicit DirichletSemigroup(const SemigroupParams& p);

    const SemigroupParams& params() const { return params_; }

    /// Dense matrix of S(t) on the grid; identity at t = 0.
    Eigen::MatrixXd matrix(double t) const;

    Field apply(double t, const Field& f) const;

    /// e^{-mu t} U(t) applied to the odd extension of f, where U(t) is the
    /// free-space Gaussian convolution (trapezoid over [-L, L]). Agrees with
    /// apply() for fields with f(0) = 0.
    Field apply_odd_extension(double t, const Field& f) const;

    /// Below this time the Gaussian is narrower than the grid resolves:
    /// trapezoid aliasing error 2 exp(-4 pi^2 t / dx^2) exceeds ~5e-9.
    double min_resolved_time() const;
    bool resolved(double t) const { return t == 0.0 || t >= min_resolved_time() * (1.0 - 1e-9); }

private:
    SemigroupParams params_;
};

Field apply_S(const SemigroupParams& p, double t, const Field& f);

struct BoundCheck {
    double measured = 0.0;
    double bound = 0.0;
    bool holds = true;

    double ratio() const { return bound > 0.0 ? measured / bound : 0.0; }
};

/// Sampled form of the four S(t) estimates: sup norm, first and second x
/// derivatives and the t derivative, each against its bound plus an
/// absolute slack of max(1e-6, dx^2). Derivatives are finite differences
/// (x: grid differences; t: central difference with step 1e-3 t).
struct SemigroupBoundsReport {
    double t = 0.0;
    double slack = 0.0;
    bool resolved = true;
    BoundCheck sup;
    BoundCheck dx;
    BoundCheck dxx;
    BoundCheck dt;

    bool all_hold() const { return sup.holds && dx.holds && dxx.holds && dt.holds; }
};

SemigroupBoundsReport check_semigroup_bounds(const SemigroupParams& p, const Field& f, double t);

}  // namespace snrd
