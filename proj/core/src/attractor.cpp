#include "snrd/attractor.hpp"

#include "snrd/errors.hpp"
#include "snrd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace snrd {

Segment advance(const DelaySolver& solver, const Segment& phi, const WienerPath& path, double t) {
    const long k = lattice_steps(t, solver.config().dt, "advance: t");
    detail::require(k >= 0, "advance: t must be non-negative");
    if (k == 0) {
        return phi;
    }
    const Segment psi = solver.to_v_segment(phi, path);
    const Trajectory traj = solver.solve(psi, path, t);
    return solver.to_u_segment(segment_at(traj, t), path, t);
}

PullbackRun pullback_solve(const DelaySolver& solver, const Segment& phi, const WienerPath& path, double t) {
    const long k = lattice_steps(t, solver.config().dt, "pullback time");
    detail::require(k > solver.delay_steps(), "pullback time must exceed tau");
    const WienerPath shifted = path.shift_knots(-k);
    Segment psi = solver.to_v_segment(phi, shifted);
    const Trajectory traj = solver.solve(psi, shifted, t);
    Segment v_seg = segment_at(traj, t);
    Segment u_seg = solver.to_u_segment(v_seg, shifted, t);
    const double sup = segment_sup_norm(u_seg);
    const double co = segment_co_norm(u_seg);
    return PullbackRun{t, std::move(psi), std::move(v_seg), std::move(u_seg), sup, co};
}

PullbackRun pullback_solve(const ModelParams& params, const SolverConfig& cfg, const Segment& phi,
                           const WienerPath& path, double t) {
    return pullback_solve(DelaySolver(params, cfg, phi.grid()), phi, path, t);
}

double profile_constant(const ModelParams& params, const Grid& grid) {
    double lap = 0.0;
    double val = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.node(i);
        double s2 = 0.0;
        double s0 = 0.0;
        for (const auto& p : params.profiles) {
            const double g2 = p.second_derivative(x);
            const double g = p.value(x);
            s2 += g2 * g2;
            s0 += g * g;
        }
        lap = std::max(lap, std::sqrt(s2));
        val = std::max(val, std::sqrt(s0));
    }
    return lap + params.lipschitz_gain() * val;
}

namespace {

double delayed_gain(const ModelParams& params) { return params.lipschitz_gain() * std::exp(params.mu * params.tau); }

}  // namespace

double absorbing_radius(const ModelParams& params, const DerivedConstants& k) {
    detail::require(k.c >= 0.0 && k.r_hat >= 0.0 && k.c1 >= 0.0, "absorbing radius: constants must be non-negative");
    const double a = delayed_gain(params);
    if (!(a < params.mu)) {
        throw ConditionViolated("absorbing radius requires eps L_f e^{mu tau} < mu");
    }
    return 2.0 * k.c * std::exp(params.mu * params.tau) * k.r_hat +
           k.c * a / (params.mu - a) * std::exp(-a) * k.r_hat + k.c1;
}

double absorbing_transient(const ModelParams& params, double c, double r_hat, double t, double psi_co) {
    const double a = delayed_gain(params);
    if (!(a < params.mu)) {
        throw ConditionViolated("absorbing transient requires eps L_f e^{mu tau} < mu");
    }
    const double mu = params.mu;
    return std::exp(mu * (params.tau - t)) * psi_co + psi_co * std::expm1((a - mu) * t) -
           c * a / (mu - a) * std::exp(-mu * t) * r_hat;
}

double pullback_bound(const ModelParams& params, double c, double r_hat, double psi_head_sup) {
    return psi_head_sup + (std::max(params.epsilon, 1.0) * params.f.bound + c * r_hat) * (2.0 / params.mu);
}

double cocycle_residual(const DelaySolver& solver, const Segment& phi, const WienerPath& path, double t, double s) {
    const double dt = solver.config().dt;
    const long kt = lattice_steps(t, dt, "cocycle: t");
    const long ks = lattice_steps(s, dt, "cocycle: s");
    detail::require(kt >= 0 && ks >= 0, "cocycle: t and s must be non-negative");
    const Segment direct = advance(solver, phi, path, t + s);
    const Segment first = advance(solver, phi, path, s);
    const Segment composed = advance(solver, first, path.shift_knots(ks), t);
    return segment_co_norm(direct - composed);
}

double cocycle_residual(const ModelParams& params, const SolverConfig& cfg, const Segment& phi,
                        const WienerPath& path, double t, double s) {
    return cocycle_residual(DelaySolver(params, cfg, phi.grid()), phi, path, t, s);
}

RateFit fit_log_rate(const std::vector<double>& times, const std::vector<double>& values, double from, double floor) {
    detail::require(times.size() == values.size(), "rate fit: series length mismatch");
    double n = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < from || !(values[i] > floor)) {
            continue;
        }
        const double y = std::log(values[i]);
        n += 1.0;
        sx += times[i];
        sy += y;
        sxx += times[i] * times[i];
        sxy += times[i] * y;
    }
    RateFit fit;
    fit.points = static_cast<int>(n);
    if (fit.points < 2) {
        return fit;
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.factor = std::exp(fit.slope);
    return fit;
}

namespace {

void require_unit_contraction(const ModelParams& params) {
    if (!params.unit_time_contraction()) {
        throw ConditionViolated(
            "fixed point requires 0 < tau < 1 and mu (1 - tau) > eps L_f (per-unit-time contraction)");
    }
}

}  // namespace

FixedPointReport fixed_point_estimate(const ModelParams& params, const SolverConfig& cfg, const Segment& phi1,
                                      const Segment& phi2, const WienerPath& path, double horizon, int threads) {
    require_unit_contraction(params);
    return pullback_distance_series(params, cfg, phi1, phi2, path, horizon, threads);
}

FixedPointReport pullback_distance_series(const ModelParams& params, const SolverConfig& cfg, const Segment& phi1,
                                          const Segment& phi2, const WienerPath& path, double horizon, int threads) {
    const long last = lattice_steps(horizon, 1.0, "fixed point horizon");
    detail::require(last >= 2, "fixed point horizon must be at least 2");
    const DelaySolver solver(params, cfg, phi1.grid());
    detail::require(solver.delay_steps() < lattice_steps(1.0, cfg.dt, "dt: 1 / dt"),
                    "fixed point: pullback times must exceed tau");

    const auto count = static_cast<std::size_t>(last);
    std::vector<Segment> from1(count, phi1);
    std::vector<Segment> from2(count, phi2);
    const bool same = phi1 == phi2;
    parallel_for(same ? count : 2 * count, threads, [&](std::size_t i) {
        const std::size_t slot = i % count;
        const double t = static_cast<double>(slot + 1);
        if (i < count) {
            from1[slot] = pullback_solve(solver, phi1, path, t).u_segment;
        } else {
            from2[slot] = pullback_solve(solver, phi2, path, t).u_segment;
        }
    });

    std::vector<double> times(count);
    std::vector<double> distances(count);
    std::vector<double> successive(count, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < count; ++i) {
        times[i] = static_cast<double>(i + 1);
        distances[i] = same ? 0.0 : segment_co_norm(from1[i] - from2[i]);
        if (i > 0) {
            successive[i] = segment_co_norm(from1[i] - from1[i - 1]);
        }
    }
    RateFit fit = fit_log_rate(times, distances, 0.5 * static_cast<double>(last));
    const double bound = std::exp(params.mu * (params.tau - 1.0) + params.lipschitz_gain());
    return FixedPointReport{std::move(times), std::move(distances), std::move(successive), fit, bound,
                            params.fixedpoint_condition(), from1.back()};
}

double stationarity_residual(const ModelParams& params, const SolverConfig& cfg, const Segment& phi,
                             const WienerPath& path, double horizon) {
    require_unit_contraction(params);
    const DelaySolver solver(params, cfg, phi.grid());
    const long one = lattice_steps(1.0, cfg.dt, "dt: 1 / dt");
    const WienerPath earlier = path.shift_knots(-one);
    const Segment here = pullback_solve(solver, phi, path, horizon).u_segment;
    const Segment before = pullback_solve(solver, phi, earlier, horizon).u_segment;
    const Segment advanced = advance(solver, before, earlier, 1.0);
    return segment_co_norm(advanced - here);
}

double time_one_contraction(const ModelParams& params, const SolverConfig& cfg, const Segment& phi1,
                            const Segment& phi2, const WienerPath& path) {
    const double initial = segment_co_norm(phi1 - phi2);
    detail::require(initial > 0.0, "time-one contraction: initial segments must differ");
    const DelaySolver solver(params, cfg, phi1.grid());
    const Segment a = advance(solver, phi1, path, 1.0);
    const Segment b = advance(solver, phi2, path, 1.0);
    return segment_co_norm(a - b) / initial;
}

}  // namespace snrd
