#include "snrd/attractor.hpp"
#include "snrd/kernel.hpp"
#include "snrd/noise.hpp"
#include "snrd/parallel.hpp"
#include "snrd/runner.hpp"
#include "snrd/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace snrd::runner {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

Row row(double t) { return Row{t, nan, nan, nan, nan, nan}; }

ExperimentResult kernel_bound(const ExperimentSpec& spec) {
    const Grid grid = spec.grid();
    const KernelParams kp(spec.model.alpha);
    ExperimentResult out;
    const auto ratios = operator_norm_trials(kp, grid, spec.trials, spec.seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        Row r = row(static_cast<double>(i));
        r.ratio = ratios[i];
        out.rows.push_back(r);
        worst = std::max(worst, ratios[i]);
    }
    out.checks.push_back({"operator norm", worst <= 1.0 + 1e-8, fmt("max |Kf|/|f| = %.17g (bound 1 + 1e-8)", worst)});

    // K(1) against erf on the nodes where the Gaussian mass beyond L is negligible.
    const NonlocalOperator k(kp, grid);
    const Field one = k.apply(Field::constant(grid, 1.0));
    double err = 0.0;
    int used = 0;
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.node(i);
        if (image_kernel_tail(kp.alpha, x, grid.length()) < 1e-12) {
            err = std::max(err, std::abs(one[i] - std::erf(x / (2.0 * std::sqrt(kp.alpha)))));
            ++used;
        }
    }
    out.checks.push_back({"K(1) vs erf", used > 0 && err <= 1e-6,
                          fmt("sup error %.3g over %g nodes with truncated mass < 1e-12", err, used)});
    return out;
}

ExperimentResult semigroup_bounds(const ExperimentSpec& spec) {
    const Grid grid = spec.grid();
    const SemigroupParams sp(spec.model.mu, grid);
    ExperimentResult out;
    const auto n_t = spec.times.size();
    const auto trials = static_cast<std::size_t>(spec.trials);
    std::vector<SemigroupBoundsReport> reports(n_t * trials);
    std::vector<double> sups(reports.size());
    parallel_for(reports.size(), spec.threads, [&](std::size_t i) {
        const Field f = smooth_test_field(grid, ensemble_seed(spec.seed, i % trials));
        reports[i] = check_semigroup_bounds(sp, f, spec.times[i / trials]);
        sups[i] = sup_norm(apply_S(sp, spec.times[i / trials], f));
    });
    bool all = true;
    int unresolved = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& rep = reports[i];
        Row r = row(rep.t);
        r.sup_norm = sups[i];
        double ratio = 0.0;
        for (const BoundCheck* b : {&rep.sup, &rep.dx, &rep.dxx, &rep.dt}) {
            ratio = std::max(ratio, b->measured / (b->bound + rep.slack));
        }
        r.ratio = ratio;
        worst = std::max(worst, ratio);
        out.rows.push_back(r);
        all = all && rep.all_hold();
        unresolved += rep.resolved ? 0 : 1;
    }
    out.checks.push_back({"semigroup bounds", all,
                          fmt("max measured/(bound + slack) = %.6g over %g cases", worst,
                              static_cast<double>(reports.size()))});
    if (unresolved > 0) {
        out.notes.push_back(fmt("%g cases below the resolved time dx^2/2", unresolved));
    }
    return out;
}

ExperimentResult ou_stats(const ExperimentSpec& spec) {
    const double dt = spec.solver.dt;
    const OUParams op(spec.model.mu);
    const OUKernel ou(op, dt);
    const auto n = static_cast<std::size_t>(spec.paths);
    const std::size_t sde_paths = std::min<std::size_t>(n, 64);
    std::vector<double> z0(n);
    std::vector<double> z1(n);
    std::vector<char> shift_ok(n);
    std::vector<double> res_fine(sde_paths);
    std::vector<double> res_coarse(sde_paths);
    const double lo = -op.s_cut - 2.0 * dt;
    const double hi = std::max(spec.horizon, 1.0) + 2.0 * dt;
    parallel_for(n, spec.threads, [&](std::size_t p) {
        const WienerPath w = sample_wiener(1, lo, hi, dt, ensemble_seed(spec.seed, p));
        z0[p] = ou.at(w, 0, 0.0);
        z1[p] = ou.at(w, 0, spec.horizon);
        shift_ok[p] = ou.at(w.shift(spec.horizon), 0, 0.0) == z1[p] ? 1 : 0;
        if (p < sde_paths) {
            res_fine[p] = ou_sde_residual(w, 0, ou, 0.0, 1.0);
            const WienerPath coarse = w.coarsen(2);
            res_coarse[p] = ou_sde_residual(coarse, 0, OUKernel(op, 2.0 * dt), 0.0, 1.0);
        }
    });

    ExperimentResult out;
    const double target = 1.0 / (2.0 * op.mu);
    auto moments = [&](const std::vector<double>& z) {
        double mean = 0.0;
        for (double v : z) {
            mean += v;
        }
        mean /= static_cast<double>(z.size());
        double var = 0.0;
        for (double v : z) {
            var += (v - mean) * (v - mean);
        }
        return std::pair{mean, var / static_cast<double>(z.size() > 1 ? z.size() - 1 : 1)};
    };
    for (std::size_t p = 0; p < n; ++p) {
        Row r = row(static_cast<double>(p));
        r.sup_norm = std::abs(z0[p]);
        r.co_norm = std::abs(z1[p]);
        r.ratio = z0[p] * z0[p] / target;
        if (p < sde_paths) {
            r.fitted_rate = res_fine[p];
        }
        out.rows.push_back(r);
    }
    const auto [m0, v0] = moments(z0);
    const auto [m1, v1] = moments(z1);
    out.checks.push_back({"stationary variance at t = 0", std::abs(v0 / target - 1.0) <= 0.05,
                          fmt("variance %.6g vs 1/(2 mu) = %.6g (mean %.3g)", v0, target, m0)});
    out.checks.push_back({"stationary variance at t = horizon", std::abs(v1 / target - 1.0) <= 0.05,
                          fmt("variance %.6g vs 1/(2 mu) = %.6g (mean %.3g)", v1, target, m1)});
    const auto exact = std::count(shift_ok.begin(), shift_ok.end(), 1);
    out.checks.push_back({"shift identity", exact == static_cast<long>(n),
                          fmt("z(t; w) == z(0; theta_t w) bitwise on %g of %g paths", static_cast<double>(exact),
                              static_cast<double>(n))});
    const double mean_fine = std::accumulate(res_fine.begin(), res_fine.end(), 0.0) / static_cast<double>(sde_paths);
    const double mean_coarse =
        std::accumulate(res_coarse.begin(), res_coarse.end(), 0.0) / static_cast<double>(sde_paths);
    out.checks.push_back({"SDE residual first order", mean_fine <= 0.75 * mean_coarse && mean_fine <= 10.0 * dt,
                          fmt("mean accumulated residual %.4g at dt, %.4g at 2 dt (dt = %g)", mean_fine, mean_coarse,
                              dt)});
    return out;
}

ExperimentResult temperedness(const ExperimentSpec& spec) {
    const OUParams op(spec.model.mu);
    const OUKernel ou(op, spec.dt_path);
    const auto n = static_cast<std::size_t>(spec.paths);
    const int m = spec.model.components();
    std::vector<double> finals(n);
    std::vector<double> rhat(n);
    std::vector<char> bound_ok(n);
    const double lo = -spec.horizon - op.s_cut - 2.0 * spec.dt_path;
    parallel_for(n, spec.threads, [&](std::size_t p) {
        const WienerPath w = sample_wiener(m, lo, 2.0 * spec.dt_path, spec.dt_path, ensemble_seed(spec.seed, p));
        const auto series = temperedness_diagnostic(w, op, spec.beta, spec.horizon, spec.stride);
        finals[p] = series.back().value;
        rhat[p] = tempered_bound(w, ou, -spec.horizon, 0.0);
        bool ok = true;
        for (long k = w.knot_of(-spec.horizon); k <= 0; ++k) {
            double s = 0.0;
            for (int j = 0; j < m; ++j) {
                const double z = ou.at_knot(w, j, k);
                s += z * z;
            }
            const double t = std::abs(static_cast<double>(k) * w.dt());
            ok = ok && s <= std::exp(0.5 * op.mu * t) * rhat[p] * (1.0 + 1e-12);
        }
        bound_ok[p] = ok ? 1 : 0;
    });
    ExperimentResult out;
    long below = 0;
    for (std::size_t p = 0; p < n; ++p) {
        Row r = row(spec.horizon);
        r.sup_norm = finals[p];
        r.radius = rhat[p];
        out.rows.push_back(r);
        below += finals[p] < 1e-3 ? 1 : 0;
    }
    const double frac = static_cast<double>(below) / static_cast<double>(n);
    out.checks.push_back({"tempered decay", frac >= 0.95,
                          fmt("fraction %.4g of paths has e^{-beta t}|z|^2 < 1e-3 at t = %g", frac, spec.horizon)});
    const auto held = std::count(bound_ok.begin(), bound_ok.end(), 1);
    out.checks.push_back({"growth bound with empirical r", held == static_cast<long>(n),
                          fmt("holds on %g of %g paths", static_cast<double>(held), static_cast<double>(n))});
    return out;
}

Segment bump_segment(const ExperimentSpec& spec, double amplitude) {
    return Segment::constant(spec.grid(), spec.model.tau, spec.solver.dt, bump_field(spec.grid(), amplitude));
}

WienerPath solver_path(const ExperimentSpec& spec, double dt, double before, double after, std::uint64_t seed) {
    const double s_cut = OUParams(spec.model.mu).s_cut;
    return sample_wiener(spec.model.components(), -(before + spec.model.tau + s_cut) - 2.0 * dt, after + 2.0 * dt,
                         dt, seed);
}

ExperimentResult picard_contraction(const ExperimentSpec& spec) {
    const Grid grid = spec.grid();
    SolverConfig picard_cfg = spec.solver;
    picard_cfg.mode = SolverMode::picard;
    SolverConfig steps_cfg = spec.solver;
    steps_cfg.mode = SolverMode::method_of_steps;
    const WienerPath w = solver_path(spec, spec.solver.dt, 0.0, spec.horizon, spec.seed);
    const Segment psi = bump_segment(spec, 2.0);

    PicardReport report;
    const Trajectory pic = DelaySolver(spec.model, picard_cfg, grid).solve(psi, w, spec.horizon, &report);
    const Trajectory mos = DelaySolver(spec.model, steps_cfg, grid).solve(psi, w, spec.horizon);

    ExperimentResult out;
    double agreement = 0.0;
    std::size_t window = 0;
    for (std::size_t i = static_cast<std::size_t>(pic.delay_steps) + 1; i < pic.frames.size(); ++i) {
        const double t = pic.time_of(i);
        while (window + 1 < report.windows.size() && report.windows[window + 1].t_start <= t - 0.5 * pic.dt) {
            ++window;
        }
        Row r = row(t);
        r.sup_norm = sup_norm(pic.frames[i]);
        r.co_norm = compact_open_norm(pic.frames[i]);
        const auto& ratios = report.windows[window].ratios;
        if (!ratios.empty()) {
            r.ratio = *std::max_element(ratios.begin(), ratios.end());
        }
        out.rows.push_back(r);
        agreement = std::max(agreement, sup_norm(pic.frames[i] - mos.frames[i]));
    }
    const double max_ratio = report.max_ratio();
    out.checks.push_back({"Picard contraction ratio", max_ratio <= report.bound + 1e-6,
                          fmt("max ratio %.6g vs (eps L_f/mu)(1 - e^{-mu T}) = %.6g", max_ratio, report.bound)});
    out.checks.push_back({"Picard convergence", report.all_converged(),
                          fmt("%g windows, tol %.3g", static_cast<double>(report.windows.size()),
                              spec.solver.picard_tol)});
    out.checks.push_back({"Picard vs method of steps", agreement <= 1e-8,
                          fmt("max sup difference %.3g (bound 1e-8)", agreement)});
    return out;
}

ExperimentResult cocycle(const ExperimentSpec& spec) {
    const Grid grid = spec.grid();
    const double dt = spec.solver.dt;
    SolverConfig fine_cfg = spec.solver;
    fine_cfg.dt = 0.5 * dt;
    fine_cfg.mode = SolverMode::method_of_steps;
    SolverConfig coarse_cfg = fine_cfg;
    coarse_cfg.dt = dt;
    const DelaySolver coarse(spec.model, coarse_cfg, grid);
    const DelaySolver fine(spec.model, fine_cfg, grid);
    const auto n = static_cast<std::size_t>(spec.paths);
    std::vector<double> r_coarse(n);
    std::vector<double> r_fine(n);
    parallel_for(n, spec.threads, [&](std::size_t p) {
        const WienerPath wf = solver_path(spec, 0.5 * dt, 0.0, spec.t + spec.s, ensemble_seed(spec.seed, p));
        const WienerPath wc = wf.coarsen(2);
        const Field bump = bump_field(grid, 1.5);
        r_coarse[p] = cocycle_residual(coarse, Segment::constant(grid, spec.model.tau, dt, bump), wc, spec.t, spec.s);
        r_fine[p] =
            cocycle_residual(fine, Segment::constant(grid, spec.model.tau, 0.5 * dt, bump), wf, spec.t, spec.s);
    });
    ExperimentResult out;
    bool small = true;
    bool halves = true;
    double worst = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        Row r = row(spec.t + spec.s);
        r.co_norm = r_coarse[p];
        r.sup_norm = r_fine[p];
        if (r_coarse[p] > 0.0) {
            r.ratio = r_fine[p] / r_coarse[p];
        }
        out.rows.push_back(r);
        worst = std::max(worst, r_coarse[p]);
        small = small && r_coarse[p] <= 10.0 * dt;
        // Residuals at round-off level (<= 1e-12) count as halved.
        halves = halves && (r_fine[p] <= 0.5 * r_coarse[p] || r_fine[p] <= 1e-12);
    }
    out.checks.push_back({"cocycle residual", small, fmt("max residual %.3g vs 10 dt = %.3g", worst, 10.0 * dt)});
    out.checks.push_back({"cocycle residual halves with dt", halves, "residual(dt/2) <= residual(dt)/2 or <= 1e-12"});
    return out;
}

ExperimentResult absorbing(const ExperimentSpec& spec) {
    const Grid grid = spec.grid();
    SolverConfig cfg = spec.solver;
    cfg.mode = SolverMode::method_of_steps;
    const DelaySolver solver(spec.model, cfg, grid);
    const OUKernel ou(OUParams(spec.model.mu), cfg.dt);
    const double c = profile_constant(spec.model, grid);
    const double t_max = *std::max_element(spec.times.begin(), spec.times.end());
    const auto n_paths = static_cast<std::size_t>(spec.paths);
    const auto n_seg = static_cast<std::size_t>(spec.segments);
    const auto n_t = spec.times.size();

    std::vector<WienerPath> paths;
    std::vector<double> rhat(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        paths.push_back(solver_path(spec, cfg.dt, t_max, 0.0, ensemble_seed(spec.seed, p)));
        rhat[p] = tempered_bound(paths[p], ou, -(t_max + spec.model.tau), 0.0);
    }
    std::vector<double> co(n_paths * n_seg * n_t);
    std::vector<double> sup(co.size());
    std::vector<double> psi_co(co.size());
    parallel_for(co.size(), spec.threads, [&](std::size_t i) {
        const std::size_t p = i / (n_seg * n_t);
        const std::size_t q = (i / n_t) % n_seg;
        const double t = spec.times[i % n_t];
        const double a = spec.max_co_norm * static_cast<double>(q + 1) / static_cast<double>(n_seg);
        const PullbackRun run = pullback_solve(solver, bump_segment(spec, q % 2 == 0 ? a : -a), paths[p], t);
        co[i] = run.co_norm;
        sup[i] = run.sup_norm;
        psi_co[i] = segment_co_norm(run.psi);
    });

    ExperimentResult out;
    bool all_enter = true;
    double worst_entry = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) {
        double c1 = 0.0;
        for (std::size_t i = p * n_seg * n_t; i < (p + 1) * n_seg * n_t; ++i) {
            c1 = std::max(c1, absorbing_transient(spec.model, c, rhat[p], spec.times[i % n_t], psi_co[i]));
        }
        const double radius = absorbing_radius(spec.model, DerivedConstants{c, rhat[p], c1});
        for (std::size_t q = 0; q < n_seg; ++q) {
            const std::size_t base = (p * n_seg + q) * n_t;
            std::size_t entry = 0;
            while (entry < n_t && co[base + entry] > radius) {
                ++entry;
            }
            bool stays = entry < n_t;
            for (std::size_t k = entry; k < n_t; ++k) {
                stays = stays && co[base + k] <= radius;
            }
            all_enter = all_enter && stays;
            if (entry < n_t) {
                worst_entry = std::max(worst_entry, spec.times[entry]);
            }
            for (std::size_t k = 0; k < n_t; ++k) {
                Row r = row(spec.times[k]);
                r.sup_norm = sup[base + k];
                r.co_norm = co[base + k];
                r.radius = radius;
                out.rows.push_back(r);
            }
        }
    }
    out.checks.push_back({"absorbing ball entry", all_enter,
                          fmt("every run enters and stays in the radius; latest entry time %g (c = %.6g)",
                              worst_entry, c)});
    return out;
}

ExperimentResult fixed_point(const ExperimentSpec& spec) {
    SolverConfig cfg = spec.solver;
    cfg.mode = SolverMode::method_of_steps;
    const Segment phi1 = bump_segment(spec, 2.0);
    const Segment phi2 = bump_segment(spec, -1.5);
    const auto n = static_cast<std::size_t>(spec.paths);
    ExperimentResult out;
    bool rate_ok = true;
    bool monotone = true;
    bool stationary = true;
    double worst_factor = 0.0;
    double worst_station = 0.0;
    double bound = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        const WienerPath w = solver_path(spec, cfg.dt, spec.horizon + 1.0, 0.0, ensemble_seed(spec.seed, p));
        const FixedPointReport rep = fixed_point_estimate(spec.model, cfg, phi1, phi2, w, spec.horizon, spec.threads);
        const double station = stationarity_residual(spec.model, cfg, phi1, w, spec.horizon);
        bound = rep.bound;
        for (std::size_t i = 0; i < rep.times.size(); ++i) {
            Row r = row(rep.times[i]);
            r.co_norm = rep.distances[i];
            r.ratio = rep.successive[i];
            r.fitted_rate = rep.fit.factor;
            out.rows.push_back(r);
            if (i > 0 && rep.times[i] > 0.5 * spec.horizon) {
                monotone = monotone && rep.distances[i] <= rep.distances[i - 1] * (1.0 + 1e-9) + 1e-14;
            }
        }
        worst_factor = std::max(worst_factor, rep.fit.factor);
        worst_station = std::max(worst_station, station);
        rate_ok = rate_ok && rep.fit.factor <= rep.bound + 0.05;
        stationary = stationary && station <= 10.0 * cfg.dt;
        if (!rep.full_condition) {
            out.notes.push_back("the two-part fixed-point condition mu > max(eps L_f/(1-tau), eps L_f e^{mu tau}) "
                                "does not hold; the per-unit-time contraction condition does");
        }
    }
    out.checks.push_back({"contraction rate", rate_ok,
                          fmt("max fitted factor %.6g vs e^{mu(tau-1)+eps L_f} + 0.05 = %.6g", worst_factor,
                              bound + 0.05)});
    out.checks.push_back({"pullback distance decreasing", monotone, "over the final half of the horizon"});
    out.checks.push_back({"stationarity of the limit", stationary,
                          fmt("max residual %.3g vs 10 dt = %.3g", worst_station, 10.0 * cfg.dt)});

    if (spec.control_mu > 0.0) {
        ModelParams control = spec.model;
        control.mu = spec.control_mu;
        ExperimentSpec wide = spec;
        wide.model.mu = std::min(spec.model.mu, control.mu);
        const WienerPath w = solver_path(wide, cfg.dt, spec.horizon + 1.0, 0.0, ensemble_seed(spec.seed, 0));
        const FixedPointReport rep = pullback_distance_series(control, cfg, phi1, phi2, w, spec.horizon, spec.threads);
        out.notes.push_back(fmt("negative control mu = %g: fitted factor %.6g, formula e^{mu(tau-1)+eps L_f} = %.6g",
                                control.mu, rep.fit.factor, rep.bound));
    }
    return out;
}

ExperimentResult convergence_study(const ExperimentSpec& spec) {
    const Grid grid = spec.grid();
    const auto levels = static_cast<std::size_t>(spec.levels);
    const double dt = spec.solver.dt;
    const int ref_factor = 1 << spec.levels;
    const double ref_dt = dt / ref_factor;
    const Field start = bump_field(grid, 1.0);
    const auto n = static_cast<std::size_t>(spec.paths);

    // Terminal v for every (path, level); level `levels` is the reference.
    std::vector<Field> sol(n * (levels + 1), Field(grid));
    std::vector<WienerPath> paths;
    for (std::size_t p = 0; p < n; ++p) {
        paths.push_back(solver_path(spec, ref_dt, 0.0, spec.horizon, ensemble_seed(spec.seed, p)));
    }
    parallel_for(sol.size(), spec.threads, [&](std::size_t i) {
        const std::size_t p = i / (levels + 1);
        const int factor = ref_factor >> (i % (levels + 1));
        SolverConfig cfg = spec.solver;
        cfg.mode = SolverMode::method_of_steps;
        cfg.dt = ref_dt * factor;
        const Segment psi = Segment::constant(grid, spec.model.tau, cfg.dt, start);
        sol[i] = DelaySolver(spec.model, cfg, grid).solve(psi, paths[p].coarsen(factor), spec.horizon).frames.back();
    });

    // Path-averaged error against the reference and between successive levels.
    std::vector<double> err(levels, 0.0);
    std::vector<double> diff(levels, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        const Field* row_sol = &sol[p * (levels + 1)];
        for (std::size_t i = 0; i < levels; ++i) {
            err[i] += sup_norm(row_sol[i] - row_sol[levels]) / static_cast<double>(n);
            diff[i] += sup_norm(row_sol[i] - row_sol[i + 1]) / static_cast<double>(n);
        }
    }

    ExperimentResult out;
    bool first_order = true;
    std::ostringstream detail;
    detail << "successive-difference ratios";
    for (std::size_t i = 0; i < levels; ++i) {
        Row r = row(dt / static_cast<double>(1 << i));
        r.sup_norm = err[i];
        r.co_norm = diff[i];
        if (i + 1 < levels) {
            r.ratio = err[i] / err[i + 1];
            const double q = diff[i] / diff[i + 1];
            r.fitted_rate = std::log2(q);
            first_order = first_order && q >= 1.6 && q <= 2.5;
            detail << ' ' << q;
        }
        out.rows.push_back(r);
    }
    detail << " (expected about 2)";
    out.checks.push_back({"first-order convergence", first_order, detail.str()});
    std::ostringstream ref;
    ref << "errors against the dt/" << ref_factor << " reference:";
    for (double e : err) {
        ref << ' ' << e;
    }
    out.notes.push_back(ref.str());
    return out;
}

}  // namespace

bool ExperimentResult::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Field smooth_test_field(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> freq(0.2, 3.0);
    std::uniform_real_distribution<double> decay(0.5, 1.5);
    double a[6];
    double b[6];
    double c[6];
    for (int k = 0; k < 6; ++k) {
        a[k] = amp(rng);
        b[k] = freq(rng);
        c[k] = decay(rng);
    }
    return Field::sample(grid, [&](double x) {
        double v = 0.0;
        for (int k = 0; k < 6; ++k) {
            v += a[k] * std::sin(b[k] * x) * std::exp(-c[k] * x);
        }
        return v;
    });
}

Field bump_field(const Grid& grid, double amplitude) {
    return Field::sample(grid, [amplitude](double x) { return amplitude * x * std::exp(1.0 - x); });
}

ExperimentResult compute_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);
    switch (spec.experiment) {
        case Experiment::kernel_bound:
            return kernel_bound(spec);
        case Experiment::semigroup_bounds:
            return semigroup_bounds(spec);
        case Experiment::ou_stats:
            return ou_stats(spec);
        case Experiment::temperedness:
            return temperedness(spec);
        case Experiment::picard_contraction:
            return picard_contraction(spec);
        case Experiment::cocycle:
            return cocycle(spec);
        case Experiment::absorbing:
            return absorbing(spec);
        case Experiment::fixed_point:
            return fixed_point(spec);
        case Experiment::convergence_study:
            return convergence_study(spec);
    }
    return {};
}

std::string render_csv(Experiment e, const std::vector<Row>& rows) {
    std::string out = "experiment,t,sup_norm,co_norm,radius,ratio,fitted_rate\n";
    const std::string name(experiment_name(e));
    char buf[32];
    for (const auto& r : rows) {
        out += name;
        for (double v : {r.t, r.sup_norm, r.co_norm, r.radius, r.ratio, r.fitted_rate}) {
            out += ',';
            if (!std::isnan(v)) {
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out += buf;
            }
        }
        out += '\n';
    }
    return out;
}

int run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir, std::ostream& log) {
    const auto file = out_dir / (std::string(experiment_name(spec.experiment)) + ".csv");
    {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        std::ofstream probe(file, std::ios::binary | std::ios::trunc);
        if (!probe) {
            log << "error: cannot write " << file.string() << '\n';
            return exit_usage;
        }
    }
    const ExperimentResult result = compute_experiment(spec);
    const std::string csv = render_csv(spec.experiment, result.rows);
    std::ofstream outf(file, std::ios::binary | std::ios::trunc);
    outf << csv;
    outf.close();
    if (!outf) {
        log << "error: failed writing " << file.string() << '\n';
        return exit_usage;
    }
    for (const auto& c : result.checks) {
        log << (c.pass ? "PASS " : "FAIL ") << experiment_name(spec.experiment) << ": " << c.name << " -- "
            << c.detail << '\n';
    }
    for (const auto& note : result.notes) {
        log << "REPORT " << experiment_name(spec.experiment) << ": " << note << '\n';
    }
    log << "wrote " << result.rows.size() << " rows to " << file.string() << '\n';
    return result.passed() ? exit_pass : exit_assertion;
}

}  // namespace snrd::runner
