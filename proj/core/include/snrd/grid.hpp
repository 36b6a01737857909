#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace snrd {

/// Uniform grid x_i = i * L / N on the truncated half-line [0, L].
class Grid {
public:
    Grid(double length, int intervals);

    double length() const { return length_; }
    int intervals() const { return intervals_; }
    /// Number of nodes, N + 1.
    int size() const { return intervals_ + 1; }
    double dx() const { return dx_; }
    double node(int i) const;
    std::vector<double> nodes() const;

    /// Largest node index with x_i <= x (up to rounding), clamped to [0, N].
    int last_node_at_or_below(double x) const;

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.length_ == b.length_ && a.intervals_ == b.intervals_;
    }

private:
    double length_;
    int intervals_;
    double dx_;
};

Grid make_grid(double length, int intervals);

/// A real function sampled on a grid; an element of X restricted to [0, L].
/// Values must be finite. The Dirichlet condition is a property checked by
/// consumers (solution frames) and not a construction invariant, since
/// forcing terms and operator test inputs may be nonzero at x = 0.
class Field {
public:
    explicit Field(const Grid& grid);
    Field(const Grid& grid, Eigen::VectorXd values);

    static Field sample(const Grid& grid, const std::function<double(double)>& fn);
    static Field constant(const Grid& grid, double value);

    const Grid& grid() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }
    const Eigen::VectorXd& values() const { return values_; }
    std::span<const double> span() const { return {values_.data(), static_cast<std::size_t>(values_.size())}; }
    double operator[](int i) const { return values_[i]; }

    bool is_dirichlet() const { return values_[0] == 0.0; }

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(double s, Field a) { return a *= s; }
    friend Field operator*(Field a, double s) { return a *= s; }
    friend bool operator==(const Field& a, const Field& b) {
        return a.grid_ == b.grid_ && a.values_ == b.values_;
    }

private:
    Grid grid_;
    Eigen::VectorXd values_;
};

/// History window [-tau, 0] sampled every dt. frames()[0] is the frame at
/// xi = -tau and frames().back() the frame at xi = 0.
class Segment {
public:
    Segment(const Grid& grid, double tau, double dt, std::vector<Field> frames);

    static Segment constant(const Grid& grid, double tau, double dt, const Field& frame);

    const Grid& grid() const { return grid_; }
    double tau() const { return tau_; }
    double dt() const { return dt_; }
    /// tau / dt.
    int delay_steps() const { return delay_steps_; }
    const std::vector<Field>& frames() const { return frames_; }

    /// Frame at lag xi in [-tau, 0]; xi must be on the dt lattice.
    const Field& at(double xi) const;
    const Field& head() const { return frames_.back(); }

    friend Segment operator-(const Segment& a, const Segment& b);
    friend bool operator==(const Segment& a, const Segment& b) {
        return a.grid_ == b.grid_ && a.delay_steps_ == b.delay_steps_ && a.dt_ == b.dt_ &&
               a.frames_ == b.frames_;
    }

private:
    Grid grid_;
    double tau_;
    double dt_;
    int delay_steps_;
    std::vector<Field> frames_;
};

/// Number of whole steps of size dt in span; throws unless span/dt is an
/// integer to within rounding.
long lattice_steps(double span, double dt, const char* what);

double sup_norm(const Field& f);

/// Truncation depth ceil(L) used when no explicit term count is given.
int default_co_terms(const Grid& grid);

/// sum_{n=1}^{n_max} 2^-n sup_{[0, min(n, L)]} |f| + 2^-n_max sup |f|.
/// The tail term bounds the neglected part of the series from above.
double compact_open_norm(const Field& f, int n_max);
double compact_open_norm(const Field& f);

double segment_sup_norm(const Segment& s);
double segment_co_norm(const Segment& s, int n_max);
double segment_co_norm(const Segment& s);

}  // namespace snrd
