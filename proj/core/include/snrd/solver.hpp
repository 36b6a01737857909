#pragma once

#include "snrd/grid.hpp"
#include "snrd/kernel.hpp"
#include "snrd/noise.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace snrd {

enum class NonlinearityKind {
    zero,
    scaled_tanh,        // M tanh(L_f s / M)
    saturating_linear,  // clamp(L_f s, -M, M)
};

struct Nonlinearity {
    NonlinearityKind kind = NonlinearityKind::scaled_tanh;
    double lipschitz = 1.0;  // L_f
    double bound = 1.0;      // M

    Nonlinearity() = default;
    Nonlinearity(NonlinearityKind k, double l_f, double m);

    double operator()(double s) const;
};

struct ModelParams {
    double mu = 2.0;
    double epsilon = 0.5;
    double alpha = 1.0;
    double tau = 0.25;
    Nonlinearity f;
    NoiseProfiles profiles{NoiseProfile{}};

    ModelParams() = default;
    ModelParams(double mu, double epsilon, double alpha, double tau, Nonlinearity f, NoiseProfiles profiles);

    /// Throws ParameterError naming the first offending field.
    void validate() const;

    int components() const { return static_cast<int>(profiles.size()); }
    double lipschitz_gain() const { return epsilon * f.lipschitz; }

    /// eps L_f e^{mu tau} - mu < 0.
    bool absorbing_condition() const;
    /// tau < 1 and mu > max(eps L_f / (1 - tau), eps L_f e^{mu tau}).
    bool fixedpoint_condition() const;
    /// tau < 1 and mu (tau - 1) + eps L_f < 0: the per-unit-time contraction
    /// factor e^{mu (tau - 1) + eps L_f} is below one.
    bool unit_time_contraction() const;
};

enum class SolverMode { method_of_steps, picard };

struct SolverConfig {
    double dt = 0.01;
    double picard_tol = 1e-10;
    int picard_max_iter = 50;
    SolverMode mode = SolverMode::method_of_steps;
    /// Length of each Picard window; 0 selects the default (0.9 T1 rounded
    /// down to the lattice when T1 is finite, else the whole horizon).
    double picard_window = 0.0;
};

/// Frames of v (or u) at t0 - tau, ..., t_end, spaced dt.
struct Trajectory {
    Grid grid;
    double t0 = 0.0;
    double dt = 0.0;
    double tau = 0.0;
    int delay_steps = 0;
    std::vector<Field> frames;

    /// Number of steps after t0.
    long steps() const { return static_cast<long>(frames.size()) - 1 - delay_steps; }
    double t_end() const { return t0 + static_cast<double>(steps()) * dt; }
    double time_of(std::size_t frame_index) const {
        return t0 + (static_cast<double>(frame_index) - delay_steps) * dt;
    }
    const Field& at(double t) const;
};

/// tau-window of frames ending at t.
Segment segment_at(const Trajectory& traj, double t);

/// eps K[f(delayed_field + delayed_noise)].
Field evaluate_F(const ModelParams& params, const Field& delayed_field, const Field& delayed_noise);
Field evaluate_F(const ModelParams& params, const NonlocalOperator& k, const Field& delayed_field,
                 const Field& delayed_noise);

/// T1 = ln(eps L_f / (eps L_f - mu)) / (2 mu), or none when eps L_f / mu <= 1.
std::optional<double> contraction_interval(const ModelParams& params);

struct PicardWindow {
    double t_start = 0.0;
    double length = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Sup-change between successive iterates over the window.
    std::vector<double> changes;
    /// changes[i+1] / changes[i] while changes[i] is above round-off.
    std::vector<double> ratios;
};

struct PicardReport {
    std::vector<PicardWindow> windows;
    /// (eps L_f / mu)(1 - e^{-mu T}) for the window length T.
    double bound = 0.0;

    double max_ratio() const;
    bool all_converged() const;
};

/// Integrator for the transformed random equation
///   dv/dt = (Delta - mu) v + eps K f(v(t - tau) + z(theta_{t-tau} omega)) + Delta z(theta_t omega)
/// in mild form. One step:
///   v_{k+1} = S(dt) v_k + dt S(dt/2) [eps K f(v_{k-d} + z_{k-d}) + Delta z_k].
/// Matrices for S(dt), dt eps S(dt/2) K and dt S(dt/2) g_j'' are built once.
class DelaySolver {
public:
    DelaySolver(const ModelParams& params, const SolverConfig& cfg, const Grid& grid);

    const ModelParams& params() const { return params_; }
    const SolverConfig& config() const { return cfg_; }
    const Grid& grid() const { return grid_; }
    int delay_steps() const { return delay_; }
    const NonlocalOperator& kernel() const { return kernel_; }

    /// v on [-tau, horizon] from the history psi along the path omega.
    Trajectory solve(const Segment& psi, const WienerPath& path, double horizon, PicardReport* report = nullptr) const;

    /// OU values z_j at knots first..last of the path, column per knot.
    Eigen::MatrixXd noise_values(const WienerPath& path, long first, long last) const;

    Field noise_at(const WienerPath& path, double t) const;

    /// u-segment at time 0 along the path converted to the v-history psi.
    Segment to_v_segment(const Segment& phi, const WienerPath& path) const;
    /// v-segment ending at time t along the path converted to u.
    Segment to_u_segment(const Segment& psi, const WienerPath& path, double t) const;

private:
    void check_path(const WienerPath& path) const;
    void check_inputs(const Segment& psi, const WienerPath& path) const;
    Eigen::VectorXd step_forcing(const Eigen::MatrixXd& z, long col) const;
    Eigen::VectorXd delayed_term(const Eigen::VectorXd& delayed, const Eigen::MatrixXd& z, long col) const;
    long picard_window_steps(long horizon_steps) const;

    ModelParams params_;
    SolverConfig cfg_;
    Grid grid_;
    int delay_;
    NonlocalOperator kernel_;
    OUKernel ou_;
    Eigen::MatrixXd step_;       // S(dt)
    Eigen::MatrixXd delay_map_;  // dt eps S(dt/2) K
    Eigen::MatrixXd forcing_;    // column j: dt S(dt/2) g_j''
    Eigen::MatrixXd profiles_;   // column j: g_j on the grid
};

Trajectory solve_v(const ModelParams& params, const SolverConfig& cfg, const Segment& psi, const WienerPath& path,
                   double horizon, PicardReport* report = nullptr);

/// u = v + z(theta_t omega), frame by frame.
Trajectory to_u(const Trajectory& traj_v, const ModelParams& params, const WienerPath& path);
/// v = u - z(theta_t omega), frame by frame.
Trajectory to_v(const Trajectory& traj_u, const ModelParams& params, const WienerPath& path);

enum class TrajectoryCsv { full, summary };

/// Columns (t, x_0 .. x_N) or (t, sup_norm, co_norm).
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, TrajectoryCsv mode);

}  // namespace snrd
