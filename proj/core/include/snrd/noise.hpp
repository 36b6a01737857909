#pragma once

#include "snrd/grid.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace snrd {

/// Two-sided m-component Brownian sample on a knot lattice k * dt,
/// piecewise linear between knots, with omega(0) = 0.
///
/// Knot values live in one immutable base array shared by all shifts of
/// the path; a shifted path only moves the origin index. Consequently
/// shift(shift(w, s), t) and shift(w, s + t) are the same object up to
/// bits, and every increment omega(b) - omega(a) is read from the base
/// data with a single subtraction regardless of how the path was shifted.
class WienerPath {
public:
    /// Path from explicit knot values. values[j][k] is component j at time
    /// (first_knot + k) * dt; the value at knot 0 must be 0.
    WienerPath(double dt, long first_knot, std::vector<std::vector<double>> values);

    static WienerPath zero(int m, double t_lo, double t_hi, double dt);

    int components() const { return static_cast<int>(base_->values.size()); }
    double dt() const { return base_->dt; }

    /// Knot index range [knot_lo, knot_hi] relative to this path's origin.
    long knot_lo() const { return base_->first - origin_; }
    long knot_hi() const { return base_->first + base_->count - 1 - origin_; }
    double t_lo() const { return static_cast<double>(knot_lo()) * dt(); }
    double t_hi() const { return static_cast<double>(knot_hi()) * dt(); }

    bool covers(long k_from, long k_to) const { return k_from >= knot_lo() && k_to <= knot_hi(); }

    /// omega_j at knot k.
    double knot(int j, long k) const { return increment(j, 0, k); }

    /// omega_j(knot b) - omega_j(knot a).
    double increment(int j, long a, long b) const;

    /// Stored knot values of component j for knots a..b (inclusive). These
    /// are offset from omega_j by a constant; only differences are meaningful.
    std::span<const double> raw_knots(int j, long a, long b) const;

    /// omega_j(t) by linear interpolation.
    double value(int j, double t) const;

    /// theta_s omega: (theta_s omega)(t) = omega(t + s) - omega(s).
    /// s must be on the knot lattice and the origin must stay in the window.
    WienerPath shift(double s) const;
    WienerPath shift_knots(long k) const;

    /// Every factor-th knot of this path as a path on the coarser lattice
    /// factor * dt (same Brownian sample, coarser piecewise-linear view).
    WienerPath coarsen(int factor) const;

    /// Knot index of a lattice time t.
    long knot_of(double t) const;

    friend bool operator==(const WienerPath& a, const WienerPath& b);

private:
    struct Base {
        double dt;
        long first;
        long count;
        std::vector<std::vector<double>> values;
    };

    WienerPath(std::shared_ptr<const Base> base, long origin) : base_(std::move(base)), origin_(origin) {}

    double raw(int j, long k) const;

    std::shared_ptr<const Base> base_;
    long origin_;
};

/// Independent standard Brownian components with N(0, dt) knot
/// increments, the halves t > 0 and t < 0 drawn from separate streams.
/// The window is widened outward to whole knots.
WienerPath sample_wiener(int m, double t_lo, double t_hi, double dt_path, std::uint64_t seed);

/// Seed for the i-th member of an ensemble; distinct streams per index.
std::uint64_t ensemble_seed(std::uint64_t seed, std::uint64_t index);

void write_path_csv(std::ostream& out, const WienerPath& w);

struct OUParams {
    double mu;
    double s_cut;

    /// s_cut defaults to the minimal depth 40 / mu.
    explicit OUParams(double mu_value);
    OUParams(double mu_value, double s_cut_value);
};

/// Discretized stationary OU map
///   z(theta_t omega) = -mu int_{-s_cut}^0 e^{mu s} (theta_t omega)(s) ds
/// by the trapezoid rule on the path lattice. The depth is rounded up to a
/// whole number of knots.
class OUKernel {
public:
    OUKernel(const OUParams& p, double dt);

    const OUParams& params() const { return params_; }
    double dt() const { return dt_; }
    /// Knots spanned by the truncated integral.
    long depth() const { return static_cast<long>(weights_.size()) - 1; }

    /// z_j at knot k of the path.
    double at_knot(const WienerPath& w, int j, long k) const;
    double at(const WienerPath& w, int j, double t) const;
    std::vector<double> all_at_knot(const WienerPath& w, long k) const;

private:
    OUParams params_;
    double dt_;
    std::vector<double> weights_;
};

double ou_value(const WienerPath& w, int component, const OUParams& p, double t);

/// Built-in spatial noise profiles, all vanishing at x = 0 and decaying.
enum class ProfileKind {
    quadratic_exp,   // x^2 e^{-x}
    gaussian_odd,    // x e^{-x^2}
    sine_exp,        // sin(pi x / L) x e^{-x}
};

struct NoiseProfile {
    ProfileKind kind = ProfileKind::quadratic_exp;
    double amplitude = 1.0;
    /// L in the sine profile.
    double length = 20.0;

    double value(double x) const;
    double second_derivative(double x) const;
};

using NoiseProfiles = std::vector<NoiseProfile>;

Field noise_field(const NoiseProfiles& profiles, std::span<const double> z, const Grid& grid);
Field laplacian_noise_field(const NoiseProfiles& profiles, std::span<const double> z, const Grid& grid);

struct TemperedSample {
    double t;
    double value;
};

/// (t, e^{-beta t} sum_j z_j(theta_{-t} omega)^2) for t = 0, stride, ...,
/// horizon. stride defaults to the path lattice.
std::vector<TemperedSample> temperedness_diagnostic(const WienerPath& w, const OUParams& p, double beta,
                                                    double horizon, double stride = 0.0);

/// Operational tempered bound: sup over lattice t in [t_from, t_to] of
///   e^{-mu |t| / 2} max(S(t), sqrt(S(t))),  S(t) = sum_j z_j(theta_t omega)^2.
/// Dominates both the squared and the plain Euclidean size of z.
double tempered_bound(const WienerPath& w, const OUKernel& ou, double t_from, double t_to);

/// Largest |sum_{k0 <= k < k1} [z(k+1) - z(k) + mu dt (z(k) + z(k+1)) / 2 - dw_k]|
/// over k1 in (k0, k0 + span / dt], i.e. the accumulated discrete SDE
/// residual of component j over [t0, t0 + span].
double ou_sde_residual(const WienerPath& w, int j, const OUKernel& ou, double t0, double span);

}  // namespace snrd
