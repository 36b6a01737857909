#include "snrd/noise.hpp"

#include "snrd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

namespace snrd {

WienerPath::WienerPath(double dt, long first_knot, std::vector<std::vector<double>> values) : origin_(0) {
    detail::require(std::isfinite(dt) && dt > 0.0, "wiener path: dt must be positive");
    detail::require(!values.empty(), "wiener path: at least one component required");
    const auto count = static_cast<long>(values.front().size());
    detail::require(first_knot <= 0 && first_knot + count - 1 >= 0, "wiener path: window must contain t = 0");
    for (const auto& c : values) {
        detail::require(static_cast<long>(c.size()) == count, "wiener path: ragged components");
        detail::require(c[static_cast<std::size_t>(-first_knot)] == 0.0, "wiener path: value at t = 0 must be 0");
    }
    base_ = std::make_shared<const Base>(Base{dt, first_knot, count, std::move(values)});
}

WienerPath WienerPath::zero(int m, double t_lo, double t_hi, double dt) {
    detail::require(m >= 1, "wiener path: m must be at least 1");
    detail::require(t_lo < 0.0 && t_hi > 0.0, "wiener path: window must satisfy t_lo < 0 < t_hi");
    detail::require(std::isfinite(dt) && dt > 0.0, "wiener path: dt must be positive");
    const auto lo = static_cast<long>(std::floor(t_lo / dt + 1e-9));
    const auto hi = static_cast<long>(std::ceil(t_hi / dt - 1e-9));
    return WienerPath(dt, lo, std::vector<std::vector<double>>(static_cast<std::size_t>(m),
                                                               std::vector<double>(static_cast<std::size_t>(hi - lo + 1), 0.0)));
}

double WienerPath::raw(int j, long k) const {
    const long idx = k + origin_ - base_->first;
    if (idx < 0 || idx >= base_->count) {
        throw WindowExhausted("wiener path: time " + std::to_string(static_cast<double>(k) * dt()) +
                              " outside the sampled window");
    }
    return base_->values[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx)];
}

std::span<const double> WienerPath::raw_knots(int j, long a, long b) const {
    detail::require(j >= 0 && j < components(), "wiener path: component index out of range");
    detail::require(a <= b, "wiener path: empty knot range");
    if (!covers(a, b)) {
        throw WindowExhausted("wiener path: knots outside the sampled window");
    }
    const auto& c = base_->values[static_cast<std::size_t>(j)];
    return {c.data() + (a + origin_ - base_->first), static_cast<std::size_t>(b - a + 1)};
}

double WienerPath::increment(int j, long a, long b) const {
    detail::require(j >= 0 && j < components(), "wiener path: component index out of range");
    return raw(j, b) - raw(j, a);
}

long WienerPath::knot_of(double t) const { return lattice_steps(t, dt(), "wiener path: time"); }

double WienerPath::value(int j, double t) const {
    detail::require(std::isfinite(t), "wiener path: time must be finite");
    const double r = t / dt();
    const double k = std::round(r);
    if (std::abs(r - k) <= 1e-9 * std::max(1.0, std::abs(r))) {
        return knot(j, static_cast<long>(k));
    }
    const auto a = static_cast<long>(std::floor(r));
    const double frac = r - static_cast<double>(a);
    const double wa = knot(j, a);
    const double wb = knot(j, a + 1);
    return wa + frac * (wb - wa);
}

WienerPath WienerPath::shift_knots(long k) const {
    const long origin = origin_ + k;
    if (origin < base_->first || origin >= base_->first + base_->count) {
        throw WindowExhausted("wiener path: shift moves the origin outside the sampled window");
    }
    return WienerPath(base_, origin);
}

WienerPath WienerPath::shift(double s) const { return shift_knots(lattice_steps(s, dt(), "wiener path: shift")); }

WienerPath WienerPath::coarsen(int factor) const {
    detail::require(factor >= 1, "wiener path: coarsening factor must be at least 1");
    const long lo = -((-knot_lo()) / factor);
    const long hi = knot_hi() / factor;
    std::vector<std::vector<double>> values(static_cast<std::size_t>(components()),
                                            std::vector<double>(static_cast<std::size_t>(hi - lo + 1)));
    for (int j = 0; j < components(); ++j) {
        for (long k = lo; k <= hi; ++k) {
            values[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - lo)] = knot(j, k * factor);
        }
    }
    return WienerPath(dt() * factor, lo, std::move(values));
}

bool operator==(const WienerPath& a, const WienerPath& b) {
    if (a.components() != b.components() || a.dt() != b.dt() || a.knot_lo() != b.knot_lo() ||
        a.knot_hi() != b.knot_hi()) {
        return false;
    }
    for (int j = 0; j < a.components(); ++j) {
        for (long k = a.knot_lo(); k <= a.knot_hi(); ++k) {
            if (a.knot(j, k) != b.knot(j, k)) {
                return false;
            }
        }
    }
    return true;
}

std::uint64_t ensemble_seed(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5eedu};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

WienerPath sample_wiener(int m, double t_lo, double t_hi, double dt_path, std::uint64_t seed) {
    detail::require(m >= 1, "wiener path: m must be at least 1");
    detail::require(std::isfinite(t_lo) && std::isfinite(t_hi) && t_lo < 0.0 && t_hi > 0.0,
                    "wiener path: window must satisfy t_lo < 0 < t_hi");
    detail::require(std::isfinite(dt_path) && dt_path > 0.0, "wiener path: dt_path must be positive");
    const auto lo = static_cast<long>(std::floor(t_lo / dt_path + 1e-9));
    const auto hi = static_cast<long>(std::ceil(t_hi / dt_path - 1e-9));
    const double sd = std::sqrt(dt_path);

    std::vector<std::vector<double>> values(static_cast<std::size_t>(m),
                                            std::vector<double>(static_cast<std::size_t>(hi - lo + 1), 0.0));
    for (int j = 0; j < m; ++j) {
        auto& c = values[static_cast<std::size_t>(j)];
        const auto zero = static_cast<std::size_t>(-lo);
        for (std::uint32_t side = 0; side < 2; ++side) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(j), side};
            std::mt19937_64 rng(seq);
            std::normal_distribution<double> normal(0.0, sd);
            double acc = 0.0;
            if (side == 1) {
                for (long k = 1; k <= hi; ++k) {
                    acc += normal(rng);
                    c[zero + static_cast<std::size_t>(k)] = acc;
                }
            } else {
                for (long k = 1; k <= -lo; ++k) {
                    acc += normal(rng);
                    c[zero - static_cast<std::size_t>(k)] = acc;
                }
            }
        }
    }
    return WienerPath(dt_path, lo, std::move(values));
}

void write_path_csv(std::ostream& out, const WienerPath& w) {
    out << "t";
    for (int j = 0; j < w.components(); ++j) {
        out << ",w_" << (j + 1);
    }
    out << '\n';
    char buf[64];
    for (long k = w.knot_lo(); k <= w.knot_hi(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(k) * w.dt());
        out << buf;
        for (int j = 0; j < w.components(); ++j) {
            std::snprintf(buf, sizeof buf, ",%.17g", w.knot(j, k));
            out << buf;
        }
        out << '\n';
    }
}

OUParams::OUParams(double mu_value) : OUParams(mu_value, 40.0 / mu_value) {}

OUParams::OUParams(double mu_value, double s_cut_value) : mu(mu_value), s_cut(s_cut_value) {
    detail::require(std::isfinite(mu) && mu > 0.0, "mu must be positive and finite");
    detail::require(std::isfinite(s_cut) && s_cut > 0.0, "s_cut must be positive");
    detail::require(mu * s_cut >= 40.0 * (1.0 - 1e-12), "s_cut: mu * s_cut must be at least 40");
}

OUKernel::OUKernel(const OUParams& p, double dt) : params_(p), dt_(dt) {
    detail::require(std::isfinite(dt) && dt > 0.0, "OU kernel: dt must be positive");
    const auto n = static_cast<long>(std::ceil(p.s_cut / dt - 1e-9));
    weights_.resize(static_cast<std::size_t>(n) + 1);
    for (long i = 0; i <= n; ++i) {
        const double trap = (i == 0 || i == n) ? 0.5 : 1.0;
        weights_[static_cast<std::size_t>(i)] = -p.mu * trap * dt * std::exp(-p.mu * dt * static_cast<double>(i));
    }
}

double OUKernel::at_knot(const WienerPath& w, int j, long k) const {
    detail::require(std::abs(w.dt() - dt_) <= 1e-12 * dt_, "OU kernel: path lattice differs from kernel lattice");
    if (!w.covers(k - depth(), k)) {
        throw WindowExhausted("OU value: path window does not cover [t - s_cut, t]");
    }
    const auto raw = w.raw_knots(j, k - depth(), k);
    const double* now = raw.data() + depth();
    double acc = 0.0;
    for (long i = 1; i <= depth(); ++i) {
        acc += weights_[static_cast<std::size_t>(i)] * (now[-i] - now[0]);
    }
    return acc;
}

double OUKernel::at(const WienerPath& w, int j, double t) const { return at_knot(w, j, w.knot_of(t)); }

std::vector<double> OUKernel::all_at_knot(const WienerPath& w, long k) const {
    std::vector<double> z(static_cast<std::size_t>(w.components()));
    for (int j = 0; j < w.components(); ++j) {
        z[static_cast<std::size_t>(j)] = at_knot(w, j, k);
    }
    return z;
}

double ou_value(const WienerPath& w, int component, const OUParams& p, double t) {
    return OUKernel(p, w.dt()).at(w, component, t);
}

namespace {

void quadratic_exp(double x, double& g, double& g2) {
    const double e = std::exp(-x);
    g = x * x * e;
    g2 = (x * x - 4.0 * x + 2.0) * e;
}

void gaussian_odd(double x, double& g, double& g2) {
    const double e = std::exp(-x * x);
    g = x * e;
    g2 = (4.0 * x * x * x - 6.0 * x) * e;
}

void sine_exp(double x, double length, double& g, double& g2) {
    const double k = std::numbers::pi / length;
    const double e = std::exp(-x);
    const double h = x * e;
    const double h1 = (1.0 - x) * e;
    const double h2 = (x - 2.0) * e;
    const double s = std::sin(k * x);
    const double c = std::cos(k * x);
    g = s * h;
    g2 = -k * k * s * h + 2.0 * k * c * h1 + s * h2;
}

void evaluate(const NoiseProfile& p, double x, double& g, double& g2) {
    switch (p.kind) {
        case ProfileKind::quadratic_exp:
            quadratic_exp(x, g, g2);
            break;
        case ProfileKind::gaussian_odd:
            gaussian_odd(x, g, g2);
            break;
        case ProfileKind::sine_exp:
            sine_exp(x, p.length, g, g2);
            break;
    }
    g *= p.amplitude;
    g2 *= p.amplitude;
}

template <bool Second>
Field combine(const NoiseProfiles& profiles, std::span<const double> z, const Grid& grid) {
    detail::require(profiles.size() == z.size(), "noise field: profile count must equal the number of OU components");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.size());
    for (std::size_t j = 0; j < profiles.size(); ++j) {
        if (z[j] == 0.0) {
            continue;
        }
        for (int i = 0; i < grid.size(); ++i) {
            double g = 0.0;
            double g2 = 0.0;
            evaluate(profiles[j], grid.node(i), g, g2);
            v[i] += (Second ? g2 : g) * z[j];
        }
    }
    return Field(grid, std::move(v));
}

}  // namespace

double NoiseProfile::value(double x) const {
    double g = 0.0;
    double g2 = 0.0;
    evaluate(*this, x, g, g2);
    return g;
}

double NoiseProfile::second_derivative(double x) const {
    double g = 0.0;
    double g2 = 0.0;
    evaluate(*this, x, g, g2);
    return g2;
}

Field noise_field(const NoiseProfiles& profiles, std::span<const double> z, const Grid& grid) {
    return combine<false>(profiles, z, grid);
}

Field laplacian_noise_field(const NoiseProfiles& profiles, std::span<const double> z, const Grid& grid) {
    return combine<true>(profiles, z, grid);
}

std::vector<TemperedSample> temperedness_diagnostic(const WienerPath& w, const OUParams& p, double beta,
                                                    double horizon, double stride) {
    detail::require(std::isfinite(beta) && beta > 0.0, "temperedness: beta must be positive");
    detail::require(std::isfinite(horizon) && horizon >= 0.0, "temperedness: horizon must be non-negative");
    if (stride <= 0.0) {
        stride = w.dt();
    }
    const long step = lattice_steps(stride, w.dt(), "temperedness: stride");
    detail::require(step >= 1, "temperedness: stride must be at least one knot");
    const long last = lattice_steps(horizon, w.dt(), "temperedness: horizon");
    const OUKernel ou(p, w.dt());
    std::vector<TemperedSample> out;
    for (long k = 0; k <= last; k += step) {
        double s = 0.0;
        for (int j = 0; j < w.components(); ++j) {
            const double z = ou.at_knot(w, j, -k);
            s += z * z;
        }
        const double t = static_cast<double>(k) * w.dt();
        out.push_back({t, std::exp(-beta * t) * s});
    }
    return out;
}

double tempered_bound(const WienerPath& w, const OUKernel& ou, double t_from, double t_to) {
    const long a = w.knot_of(t_from);
    const long b = w.knot_of(t_to);
    detail::require(a <= b, "tempered bound: empty time range");
    const double mu = ou.params().mu;
    double best = 0.0;
    for (long k = a; k <= b; ++k) {
        double s = 0.0;
        for (int j = 0; j < w.components(); ++j) {
            const double z = ou.at_knot(w, j, k);
            s += z * z;
        }
        const double t = std::abs(static_cast<double>(k) * w.dt());
        best = std::max(best, std::exp(-0.5 * mu * t) * std::max(s, std::sqrt(s)));
    }
    return best;
}

double ou_sde_residual(const WienerPath& w, int j, const OUKernel& ou, double t0, double span) {
    const long k0 = w.knot_of(t0);
    const long n = lattice_steps(span, w.dt(), "SDE residual: span");
    detail::require(n >= 1, "SDE residual: span must cover at least one knot");
    const double mu = ou.params().mu;
    const double h = w.dt();
    double acc = 0.0;
    double worst = 0.0;
    double z_prev = ou.at_knot(w, j, k0);
    for (long k = k0; k < k0 + n; ++k) {
        const double z_next = ou.at_knot(w, j, k + 1);
        acc += z_next - z_prev + 0.5 * mu * h * (z_prev + z_next) - w.increment(j, k, k + 1);
        worst = std::max(worst, std::abs(acc));
        z_prev = z_next;
    }
    return worst;
}

}  // namespace snrd
