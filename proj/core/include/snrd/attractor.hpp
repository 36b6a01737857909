#pragma once

#include "snrd/grid.hpp"
#include "snrd/noise.hpp"
#include "snrd/solver.hpp"

#include <vector>

namespace snrd {

/// Phi(t, omega, phi): the u-segment at time t of the solution started
/// from the u-history phi along omega. t = 0 returns phi.
Segment advance(const DelaySolver& solver, const Segment& phi, const WienerPath& path, double t);

struct PullbackRun {
    double t = 0.0;
    /// v-history at the start, phi - z(theta_xi theta_{-t} omega).
    Segment psi;
    /// v_t(., theta_{-t} omega, psi).
    Segment v_segment;
    /// u_t(., theta_{-t} omega, phi).
    Segment u_segment;
    double sup_norm = 0.0;
    double co_norm = 0.0;
};

/// Integrates along theta_{-t} omega from phi over [0, t].
PullbackRun pullback_solve(const DelaySolver& solver, const Segment& phi, const WienerPath& path, double t);
PullbackRun pullback_solve(const ModelParams& params, const SolverConfig& cfg, const Segment& phi,
                           const WienerPath& path, double t);

struct DerivedConstants {
    double c = 0.0;
    double r_hat = 0.0;
    double c1 = 1.0;
};

/// sup_x sqrt(sum_j g_j''^2) + eps L_f sup_x sqrt(sum_j g_j^2) over the grid
/// nodes, so that |Delta z(x)| + eps L_f |z(x)| <= c |z|_2 pointwise.
double profile_constant(const ModelParams& params, const Grid& grid);

/// 2 c e^{mu tau} r + (c A / (mu - A)) e^{-A} r + c1 with A = eps L_f e^{mu tau}.
/// Throws ConditionViolated unless A < mu.
double absorbing_radius(const ModelParams& params, const DerivedConstants& k);

/// Left side of the transient inequality that c1 must dominate at time t:
///   e^{mu (tau - t)} P + P (e^{(A - mu) t} - 1) - (c A / (mu - A)) e^{-mu t} r,
/// where P is the co-norm of the pulled-back initial v-history.
double absorbing_transient(const ModelParams& params, double c, double r_hat, double t, double psi_co);

/// |psi(0)| + (max(eps, 1) M + c r)(2 / mu).
double pullback_bound(const ModelParams& params, double c, double r_hat, double psi_head_sup);

/// Co-norm of Phi(t + s, omega, phi) - Phi(t, theta_s omega, Phi(s, omega, phi)).
double cocycle_residual(const DelaySolver& solver, const Segment& phi, const WienerPath& path, double t, double s);
double cocycle_residual(const ModelParams& params, const SolverConfig& cfg, const Segment& phi,
                        const WienerPath& path, double t, double s);

struct RateFit {
    double slope = 0.0;
    double factor = 0.0;
    int points = 0;
};

/// Least-squares slope of log(value) against time over samples with
/// time >= from and value > floor; factor = exp(slope). With fewer than two
/// usable samples the factor is 0 (series already at the floor).
RateFit fit_log_rate(const std::vector<double>& times, const std::vector<double>& values, double from,
                     double floor = 1e-13);

struct FixedPointReport {
    std::vector<double> times;
    /// Co-norm distance between the two pullback u-segments at each time.
    std::vector<double> distances;
    /// Co-norm distance between successive snapshots from phi1 (NaN at the
    /// first time).
    std::vector<double> successive;
    RateFit fit;
    /// e^{mu (tau - 1) + eps L_f}.
    double bound = 0.0;
    bool full_condition = false;
    /// Snapshot at the largest pullback time: the estimate of xi*(omega).
    Segment limit;
};

/// Pullback runs from phi1 and phi2 at times 1, 2, ..., horizon (each run
/// independent, `threads` at a time). Requires tau < 1 and
/// mu (1 - tau) > eps L_f; the full two-part condition is reported.
FixedPointReport fixed_point_estimate(const ModelParams& params, const SolverConfig& cfg, const Segment& phi1,
                                      const Segment& phi2, const WienerPath& path, double horizon, int threads = 1);

/// The same series without the parameter gate (used for negative controls).
FixedPointReport pullback_distance_series(const ModelParams& params, const SolverConfig& cfg, const Segment& phi1,
                                          const Segment& phi2, const WienerPath& path, double horizon,
                                          int threads = 1);

/// Co-norm of Phi(1, theta_{-1} omega, xi*(theta_{-1} omega)) - xi*(omega),
/// both estimates taken as pullback snapshots from phi over `horizon`.
double stationarity_residual(const ModelParams& params, const SolverConfig& cfg, const Segment& phi,
                             const WienerPath& path, double horizon);

/// |Phi(1, omega, phi1) - Phi(1, omega, phi2)|_co / |phi1 - phi2|_co.
double time_one_contraction(const ModelParams& params, const SolverConfig& cfg, const Segment& phi1,
                            const Segment& phi2, const WienerPath& path);

}  // namespace snrd
