#include "snrd/semigroup.hpp"

#include "snrd/errors.hpp"
#include "snrd/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace snrd {

SemigroupParams::SemigroupParams(double mu_value, const Grid& grid_value) : mu(mu_value), grid(grid_value) {
    detail::require(std::isfinite(mu) && mu > 0.0, "mu must be positive and finite");
}

DirichletSemigroup::DirichletSemigroup(const SemigroupParams& p) : params_(p) {}

double DirichletSemigroup::min_resolved_time() const {
    const double h = params_.grid.dx();
    return 0.5 * h * h;
}

Eigen::MatrixXd DirichletSemigroup::matrix(double t) const {
    detail::require(std::isfinite(t) && t >= 0.0, "semigroup: t must be non-negative");
    if (t == 0.0) {
        return Eigen::MatrixXd::Identity(params_.grid.size(), params_.grid.size());
    }
    return std::exp(-params_.mu * t) * ImageKernelQuadrature(params_.grid, t).weights();
}

Field DirichletSemigroup::apply(double t, const Field& f) const {
    detail::require(std::isfinite(t) && t >= 0.0, "semigroup: t must be non-negative");
    detail::require(f.grid() == params_.grid, "semigroup: field grid mismatch");
    if (t == 0.0) {
        return f;
    }
    return Field(params_.grid, matrix(t) * f.values());
}

Field DirichletSemigroup::apply_odd_extension(double t, const Field& f) const {
    detail::require(std::isfinite(t) && t >= 0.0, "semigroup: t must be non-negative");
    detail::require(f.grid() == params_.grid, "semigroup: field grid mismatch");
    if (t == 0.0) {
        return f;
    }
    const Grid& g = params_.grid;
    const int n = g.intervals();
    const double h = g.dx();
    const double norm = std::exp(-params_.mu * t) / std::sqrt(4.0 * std::numbers::pi * t);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
    for (int i = 0; i < g.size(); ++i) {
        const double x = g.node(i);
        double acc = 0.0;
        for (int j = -n; j <= n; ++j) {
            const double y = (j < 0 ? -1.0 : 1.0) * g.node(std::abs(j));
            const double odd = (j < 0 ? -1.0 : 1.0) * f[std::abs(j)];
            const double w = (std::abs(j) == n ? 0.5 : 1.0) * h;
            const double d = x - y;
            acc += w * std::exp(-d * d / (4.0 * t)) * odd;
        }
        out[i] = norm * acc;
    }
    return Field(g, std::move(out));
}

Field apply_S(const SemigroupParams& p, double t, const Field& f) { return DirichletSemigroup(p).apply(t, f); }

namespace {

double max_first_difference(const Eigen::VectorXd& u, double h) {
    const auto n = u.size();
    double m = std::max(std::abs(u[1] - u[0]), std::abs(u[n - 1] - u[n - 2])) / h;
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        m = std::max(m, std::abs(u[i + 1] - u[i - 1]) / (2.0 * h));
    }
    return m;
}

double max_second_difference(const Eigen::VectorXd& u, double h) {
    double m = 0.0;
    for (Eigen::Index i = 1; i + 1 < u.size(); ++i) {
        m = std::max(m, std::abs(u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h));
    }
    return m;
}

BoundCheck make_check(double measured, double bound, double slack) {
    return BoundCheck{measured, bound, measured <= bound + slack};
}

}  // namespace

SemigroupBoundsReport check_semigroup_bounds(const SemigroupParams& p, const Field& f, double t) {
    detail::require(std::isfinite(t) && t > 0.0, "semigroup bounds: t must be positive");
    const DirichletSemigroup s(p);
    const double h = p.grid.dx();
    const double norm_f = sup_norm(f);
    const double decay = std::exp(-p.mu * t);

    SemigroupBoundsReport r;
    r.t = t;
    r.slack = std::max(1e-6, h * h);
    r.resolved = s.resolved(t);

    const Field u = s.apply(t, f);
    r.sup = make_check(sup_norm(u), decay * norm_f, r.slack);
    r.dx = make_check(max_first_difference(u.values(), h), decay * norm_f / std::sqrt(std::numbers::pi * t), r.slack);
    r.dxx = make_check(max_second_difference(u.values(), h), decay * norm_f / t, r.slack);

    const double step = 1e-3 * t;
    const Field later = s.apply(t + step, f);
    const Field earlier = s.apply(t - step, f);
    const double dt_measured = ((later.values() - earlier.values()) / (2.0 * step)).cwiseAbs().maxCoeff();
    r.dt = make_check(dt_measured, (1.0 + p.mu * t) * decay * norm_f / t, r.slack);
    return r;
}

}  // namespace snrd
