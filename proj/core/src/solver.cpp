#include "snrd/solver.hpp"

#include "snrd/errors.hpp"
#include "snrd/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace snrd {

Nonlinearity::Nonlinearity(NonlinearityKind k, double l_f, double m) : kind(k), lipschitz(l_f), bound(m) {
    detail::require(std::isfinite(l_f) && l_f > 0.0, "L_f must be positive and finite");
    detail::require(std::isfinite(m) && m > 0.0, "M must be positive and finite");
}

double Nonlinearity::operator()(double s) const {
    switch (kind) {
        case NonlinearityKind::zero:
            return 0.0;
        case NonlinearityKind::scaled_tanh:
            return bound * std::tanh(lipschitz * s / bound);
        case NonlinearityKind::saturating_linear:
            return std::clamp(lipschitz * s, -bound, bound);
    }
    return 0.0;
}

ModelParams::ModelParams(double mu_v, double epsilon_v, double alpha_v, double tau_v, Nonlinearity f_v,
                         NoiseProfiles profiles_v)
    : mu(mu_v), epsilon(epsilon_v), alpha(alpha_v), tau(tau_v), f(f_v), profiles(std::move(profiles_v)) {
    validate();
}

void ModelParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    detail::require(positive(mu), "mu must be positive and finite");
    detail::require(positive(epsilon), "epsilon must be positive and finite");
    detail::require(positive(alpha), "alpha must be positive and finite");
    detail::require(positive(tau), "tau must be positive and finite");
    detail::require(positive(f.lipschitz), "L_f must be positive and finite");
    detail::require(positive(f.bound), "M must be positive and finite");
    detail::require(!profiles.empty(), "profiles: at least one noise profile is required");
    for (const auto& p : profiles) {
        detail::require(std::isfinite(p.amplitude), "profiles: amplitude must be finite");
        detail::require(positive(p.length), "profiles: sine length must be positive");
    }
}

bool ModelParams::absorbing_condition() const { return lipschitz_gain() * std::exp(mu * tau) - mu < 0.0; }

bool ModelParams::fixedpoint_condition() const {
    if (!(tau < 1.0)) {
        return false;
    }
    const double g = lipschitz_gain();
    return mu > std::max(g / (1.0 - tau), g * std::exp(mu * tau));
}

bool ModelParams::unit_time_contraction() const {
    return tau < 1.0 && mu * (tau - 1.0) + lipschitz_gain() < 0.0;
}

const Field& Trajectory::at(double t) const {
    const long k = lattice_steps(t - t0, dt, "trajectory time");
    detail::require(k >= -delay_steps && k <= steps(), "trajectory: time outside the computed range");
    return frames[static_cast<std::size_t>(k + delay_steps)];
}

Segment segment_at(const Trajectory& traj, double t) {
    const long k = lattice_steps(t - traj.t0, traj.dt, "segment_at time");
    detail::require(k >= 0 && k <= traj.steps(), "segment_at: t outside [t0, t_end]");
    const auto first = traj.frames.begin() + k;
    return Segment(traj.grid, traj.tau, traj.dt, std::vector<Field>(first, first + traj.delay_steps + 1));
}

Field evaluate_F(const ModelParams& params, const NonlocalOperator& k, const Field& delayed_field,
                 const Field& delayed_noise) {
    detail::require(delayed_field.grid() == delayed_noise.grid() && delayed_field.grid() == k.grid(),
                    "evaluate_F: grid mismatch");
    Eigen::VectorXd arg = delayed_field.values() + delayed_noise.values();
    for (Eigen::Index i = 0; i < arg.size(); ++i) {
        arg[i] = params.f(arg[i]);
    }
    return Field(k.grid(), params.epsilon * (k.matrix() * arg));
}

Field evaluate_F(const ModelParams& params, const Field& delayed_field, const Field& delayed_noise) {
    return evaluate_F(params, NonlocalOperator(KernelParams(params.alpha), delayed_field.grid()), delayed_field,
                      delayed_noise);
}

std::optional<double> contraction_interval(const ModelParams& params) {
    const double g = params.lipschitz_gain();
    if (g / params.mu <= 1.0) {
        return std::nullopt;
    }
    return std::log(g / (g - params.mu)) / (2.0 * params.mu);
}

double PicardReport::max_ratio() const {
    double m = 0.0;
    for (const auto& w : windows) {
        for (double r : w.ratios) {
            m = std::max(m, r);
        }
    }
    return m;
}

bool PicardReport::all_converged() const {
    return std::all_of(windows.begin(), windows.end(), [](const PicardWindow& w) { return w.converged; });
}

DelaySolver::DelaySolver(const ModelParams& params, const SolverConfig& cfg, const Grid& grid)
    : params_(params),
      cfg_(cfg),
      grid_(grid),
      delay_(0),
      kernel_(KernelParams(params.alpha), grid),
      ou_(OUParams(params.mu), cfg.dt) {
    params_.validate();
    detail::require(std::isfinite(cfg.dt) && cfg.dt > 0.0, "dt must be positive");
    delay_ = static_cast<int>(lattice_steps(params.tau, cfg.dt, "dt: tau / dt"));
    detail::require(delay_ >= 1, "dt must not exceed tau");
    detail::require(cfg.picard_tol > 0.0, "picard_tol must be positive");
    detail::require(cfg.picard_max_iter >= 1, "picard_max_iter must be at least 1");
    detail::require(cfg.picard_window >= 0.0, "picard_window must be non-negative");

    const SemigroupParams sp(params.mu, grid);
    const DirichletSemigroup s(sp);
    detail::require(s.resolved(0.5 * cfg.dt),
                    "dt: half step is below the grid's minimum resolved semigroup time dx^2 / 2");
    if (cfg.mode == SolverMode::picard) {
        if (const auto t1 = contraction_interval(params)) {
            detail::require(cfg.dt < *t1, "dt must be smaller than the contraction interval T1 in picard mode");
        }
    }

    step_ = s.matrix(cfg.dt);
    const Eigen::MatrixXd half = cfg.dt * s.matrix(0.5 * cfg.dt);
    delay_map_ = params.epsilon * (half * kernel_.matrix());

    const int m = params.components();
    profiles_.resize(grid.size(), m);
    Eigen::MatrixXd second(grid.size(), m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < grid.size(); ++i) {
            profiles_(i, j) = params.profiles[static_cast<std::size_t>(j)].value(grid.node(i));
            second(i, j) = params.profiles[static_cast<std::size_t>(j)].second_derivative(grid.node(i));
        }
    }
    forcing_ = half * second;
}

Eigen::MatrixXd DelaySolver::noise_values(const WienerPath& path, long first, long last) const {
    Eigen::MatrixXd z(params_.components(), last - first + 1);
    for (long k = first; k <= last; ++k) {
        for (int j = 0; j < params_.components(); ++j) {
            z(j, k - first) = ou_.at_knot(path, j, k);
        }
    }
    return z;
}

Field DelaySolver::noise_at(const WienerPath& path, double t) const {
    check_path(path);
    const long k = path.knot_of(t);
    return Field(grid_, profiles_ * noise_values(path, k, k).col(0));
}

void DelaySolver::check_path(const WienerPath& path) const {
    detail::require(std::abs(path.dt() - cfg_.dt) <= 1e-12 * cfg_.dt, "path: knot spacing must equal dt");
    detail::require(path.components() == params_.components(),
                    "path: component count must equal the number of noise profiles");
}

void DelaySolver::check_inputs(const Segment& psi, const WienerPath& path) const {
    detail::require(psi.grid() == grid_, "initial segment: grid mismatch");
    detail::require(psi.delay_steps() == delay_ && std::abs(psi.dt() - cfg_.dt) <= 1e-12 * cfg_.dt,
                    "initial segment: lattice differs from the solver lattice");
    check_path(path);
}

Eigen::VectorXd DelaySolver::step_forcing(const Eigen::MatrixXd& z, long col) const { return forcing_ * z.col(col); }

Eigen::VectorXd DelaySolver::delayed_term(const Eigen::VectorXd& delayed, const Eigen::MatrixXd& z, long col) const {
    Eigen::VectorXd arg = delayed + profiles_ * z.col(col);
    if (params_.f.kind == NonlinearityKind::zero) {
        return Eigen::VectorXd::Zero(arg.size());
    }
    for (Eigen::Index i = 0; i < arg.size(); ++i) {
        arg[i] = params_.f(arg[i]);
    }
    return delay_map_ * arg;
}

long DelaySolver::picard_window_steps(long horizon_steps) const {
    long p = horizon_steps;
    if (cfg_.picard_window > 0.0) {
        p = static_cast<long>(std::floor(cfg_.picard_window / cfg_.dt + 1e-9));
    } else if (const auto t1 = contraction_interval(params_)) {
        p = static_cast<long>(std::floor(0.9 * *t1 / cfg_.dt + 1e-9));
    }
    return std::clamp(p, 1L, horizon_steps);
}

Trajectory DelaySolver::solve(const Segment& psi, const WienerPath& path, double horizon, PicardReport* report) const {
    check_inputs(psi, path);
    detail::require(std::isfinite(horizon) && horizon >= cfg_.dt * (1.0 - 1e-9), "horizon must be at least dt");
    const long steps = lattice_steps(horizon, cfg_.dt, "horizon");
    for (const auto& f : psi.frames()) {
        detail::require(f.is_dirichlet(), "initial segment: frames must vanish at x = 0");
    }
    const long d = delay_;
    const Eigen::MatrixXd z = noise_values(path, -d, steps);

    std::vector<Eigen::VectorXd> v;
    v.reserve(static_cast<std::size_t>(steps + d + 1));
    for (const auto& f : psi.frames()) {
        v.push_back(f.values());
    }
    // v[k + d] holds the frame at step k; z column k + d holds z at step k.
    auto next = [&](const Eigen::VectorXd& current, const Eigen::VectorXd& delayed, long k) {
        Eigen::VectorXd out = step_ * current;
        out += delayed_term(delayed, z, k);
        out += step_forcing(z, k + d);
        return out;
    };

    if (cfg_.mode == SolverMode::method_of_steps) {
        for (long k = 0; k < steps; ++k) {
            v.push_back(next(v[static_cast<std::size_t>(k + d)], v[static_cast<std::size_t>(k)], k));
        }
    } else {
        const long window = picard_window_steps(steps);
        PicardReport local;
        const double t_win = static_cast<double>(window) * cfg_.dt;
        local.bound = params_.lipschitz_gain() / params_.mu * (1.0 - std::exp(-params_.mu * t_win));
        for (long a = 0; a < steps; a += window) {
            const long b = std::min(a + window, steps);
            PicardWindow info;
            info.t_start = static_cast<double>(a) * cfg_.dt;
            info.length = static_cast<double>(b - a) * cfg_.dt;
            // Iterate Lambda starting from the constant extension of v(t_a).
            std::vector<Eigen::VectorXd> cand(static_cast<std::size_t>(b - a), v[static_cast<std::size_t>(a + d)]);
            auto frame = [&](long k) -> const Eigen::VectorXd& {
                return k <= a ? v[static_cast<std::size_t>(k + d)] : cand[static_cast<std::size_t>(k - a - 1)];
            };
            std::vector<Eigen::VectorXd> fresh(cand.size());
            for (int it = 1; it <= cfg_.picard_max_iter; ++it) {
                const Eigen::VectorXd* current = &v[static_cast<std::size_t>(a + d)];
                double change = 0.0;
                for (long k = a; k < b; ++k) {
                    auto& slot = fresh[static_cast<std::size_t>(k - a)];
                    slot = next(*current, frame(k - d), k);
                    change = std::max(change, (slot - cand[static_cast<std::size_t>(k - a)]).cwiseAbs().maxCoeff());
                    current = &slot;
                }
                std::swap(cand, fresh);
                if (!info.changes.empty() && info.changes.back() > 1e-13) {
                    info.ratios.push_back(change / info.changes.back());
                }
                info.changes.push_back(change);
                info.iterations = it;
                if (change < cfg_.picard_tol) {
                    info.converged = true;
                    break;
                }
            }
            for (auto& f : cand) {
                v.push_back(std::move(f));
            }
            local.windows.push_back(std::move(info));
        }
        if (report != nullptr) {
            *report = std::move(local);
        }
    }

    Trajectory out{grid_, 0.0, cfg_.dt, params_.tau, delay_, {}};
    out.frames.reserve(v.size());
    for (auto& values : v) {
        out.frames.emplace_back(grid_, std::move(values));
    }
    return out;
}

Segment DelaySolver::to_v_segment(const Segment& phi, const WienerPath& path) const {
    check_inputs(phi, path);
    const Eigen::MatrixXd z = noise_values(path, -delay_, 0);
    std::vector<Field> frames;
    frames.reserve(phi.frames().size());
    for (std::size_t k = 0; k < phi.frames().size(); ++k) {
        frames.emplace_back(grid_, phi.frames()[k].values() - profiles_ * z.col(static_cast<Eigen::Index>(k)));
    }
    return Segment(grid_, params_.tau, cfg_.dt, std::move(frames));
}

Segment DelaySolver::to_u_segment(const Segment& psi, const WienerPath& path, double t) const {
    check_inputs(psi, path);
    const long k = path.knot_of(t);
    const Eigen::MatrixXd z = noise_values(path, k - delay_, k);
    std::vector<Field> frames;
    frames.reserve(psi.frames().size());
    for (std::size_t i = 0; i < psi.frames().size(); ++i) {
        frames.emplace_back(grid_, psi.frames()[i].values() + profiles_ * z.col(static_cast<Eigen::Index>(i)));
    }
    return Segment(grid_, params_.tau, cfg_.dt, std::move(frames));
}

Trajectory solve_v(const ModelParams& params, const SolverConfig& cfg, const Segment& psi, const WienerPath& path,
                   double horizon, PicardReport* report) {
    return DelaySolver(params, cfg, psi.grid()).solve(psi, path, horizon, report);
}

namespace {

Trajectory conjugate(const Trajectory& traj, const ModelParams& params, const WienerPath& path, double sign) {
    detail::require(std::abs(path.dt() - traj.dt) <= 1e-12 * traj.dt, "path: knot spacing must equal the trajectory dt");
    detail::require(path.components() == params.components(),
                    "path: component count must equal the number of noise profiles");
    const OUKernel ou(OUParams(params.mu), traj.dt);
    const long first = lattice_steps(traj.t0, traj.dt, "trajectory t0") - traj.delay_steps;
    Trajectory out = traj;
    std::vector<double> z(static_cast<std::size_t>(params.components()));
    for (std::size_t i = 0; i < out.frames.size(); ++i) {
        for (int j = 0; j < params.components(); ++j) {
            z[static_cast<std::size_t>(j)] = ou.at_knot(path, j, first + static_cast<long>(i));
        }
        const Field n = noise_field(params.profiles, z, traj.grid);
        out.frames[i] = sign > 0.0 ? traj.frames[i] + n : traj.frames[i] - n;
    }
    return out;
}

}  // namespace

Trajectory to_u(const Trajectory& traj_v, const ModelParams& params, const WienerPath& path) {
    return conjugate(traj_v, params, path, 1.0);
}

Trajectory to_v(const Trajectory& traj_u, const ModelParams& params, const WienerPath& path) {
    return conjugate(traj_u, params, path, -1.0);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, TrajectoryCsv mode) {
    char buf[64];
    if (mode == TrajectoryCsv::summary) {
        out << "t,sup_norm,co_norm\n";
    } else {
        out << "t";
        for (int i = 0; i < traj.grid.size(); ++i) {
            out << ",x_" << i;
        }
        out << '\n';
    }
    for (std::size_t k = 0; k < traj.frames.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.time_of(k));
        out << buf;
        const Field& f = traj.frames[k];
        if (mode == TrajectoryCsv::summary) {
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g", sup_norm(f), compact_open_norm(f));
            out << buf;
        } else {
            for (int i = 0; i < f.size(); ++i) {
                std::snprintf(buf, sizeof buf, ",%.17g", f[i]);
                out << buf;
            }
        }
        out << '\n';
    }
}

}  // namespace snrd
