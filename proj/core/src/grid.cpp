#include "snrd/grid.hpp"

#include "snrd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace snrd {

Grid::Grid(double length, int intervals) : length_(length), intervals_(intervals), dx_(0.0) {
    detail::require(std::isfinite(length) && length > 0.0, "grid: L must be positive");
    detail::require(intervals >= 2, "grid: N must be at least 2");
    dx_ = length_ / intervals_;
}

double Grid::node(int i) const {
    // L * i / N keeps x_N == L exactly.
    return length_ * static_cast<double>(i) / static_cast<double>(intervals_);
}

std::vector<double> Grid::nodes() const {
    std::vector<double> out(static_cast<std::size_t>(size()));
    for (int i = 0; i < size(); ++i) {
        out[static_cast<std::size_t>(i)] = node(i);
    }
    return out;
}

int Grid::last_node_at_or_below(double x) const {
    if (x >= length_) {
        return intervals_;
    }
    if (x <= 0.0) {
        return 0;
    }
    const double r = x / dx_;
    auto i = static_cast<int>(std::floor(r + 1e-9));
    return std::clamp(i, 0, intervals_);
}

Grid make_grid(double length, int intervals) { return Grid(length, intervals); }

Field::Field(const Grid& grid) : grid_(grid), values_(Eigen::VectorXd::Zero(grid.size())) {}

Field::Field(const Grid& grid, Eigen::VectorXd values) : grid_(grid), values_(std::move(values)) {
    detail::require(values_.size() == grid_.size(), "field: value count must equal N + 1");
    detail::require(values_.allFinite(), "field: values must be finite");
}

Field Field::sample(const Grid& grid, const std::function<double(double)>& fn) {
    Eigen::VectorXd v(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        v[i] = fn(grid.node(i));
    }
    return Field(grid, std::move(v));
}

Field Field::constant(const Grid& grid, double value) {
    return Field(grid, Eigen::VectorXd::Constant(grid.size(), value));
}

Field& Field::operator+=(const Field& other) {
    detail::require(grid_ == other.grid_, "field: grid mismatch");
    values_ += other.values_;
    return *this;
}

Field& Field::operator-=(const Field& other) {
    detail::require(grid_ == other.grid_, "field: grid mismatch");
    values_ -= other.values_;
    return *this;
}

Field& Field::operator*=(double s) {
    values_ *= s;
    return *this;
}

long lattice_steps(double span, double dt, const char* what) {
    detail::require(std::isfinite(dt) && dt > 0.0, std::string(what) + ": dt must be positive");
    detail::require(std::isfinite(span), std::string(what) + ": span must be finite");
    const double r = span / dt;
    const double k = std::round(r);
    detail::require(std::abs(r - k) <= 1e-9 * std::max(1.0, std::abs(r)),
                    std::string(what) + ": not a whole number of dt steps");
    return static_cast<long>(k);
}

Segment::Segment(const Grid& grid, double tau, double dt, std::vector<Field> frames)
    : grid_(grid), tau_(tau), dt_(dt), delay_steps_(0), frames_(std::move(frames)) {
    detail::require(std::isfinite(tau) && tau > 0.0, "segment: tau must be positive");
    delay_steps_ = static_cast<int>(lattice_steps(tau, dt, "segment: tau / dt"));
    detail::require(delay_steps_ >= 1, "segment: dt must not exceed tau");
    detail::require(frames_.size() == static_cast<std::size_t>(delay_steps_) + 1,
                    "segment: frame count must be tau / dt + 1");
    for (const auto& f : frames_) {
        detail::require(f.grid() == grid_, "segment: frame grid mismatch");
    }
}

Segment Segment::constant(const Grid& grid, double tau, double dt, const Field& frame) {
    const auto d = lattice_steps(tau, dt, "segment: tau / dt");
    detail::require(d >= 1, "segment: dt must not exceed tau");
    return Segment(grid, tau, dt, std::vector<Field>(static_cast<std::size_t>(d) + 1, frame));
}

const Field& Segment::at(double xi) const {
    const long k = lattice_steps(xi, dt_, "segment lag");
    detail::require(k <= 0 && k >= -delay_steps_, "segment lag outside [-tau, 0]");
    return frames_[static_cast<std::size_t>(delay_steps_ + k)];
}

Segment operator-(const Segment& a, const Segment& b) {
    detail::require(a.grid_ == b.grid_ && a.delay_steps_ == b.delay_steps_,
                    "segment difference: shape mismatch");
    std::vector<Field> frames;
    frames.reserve(a.frames_.size());
    for (std::size_t k = 0; k < a.frames_.size(); ++k) {
        frames.push_back(a.frames_[k] - b.frames_[k]);
    }
    return Segment(a.grid_, a.tau_, a.dt_, std::move(frames));
}

double sup_norm(const Field& f) { return f.values().cwiseAbs().maxCoeff(); }

int default_co_terms(const Grid& grid) { return static_cast<int>(std::ceil(grid.length() - 1e-12)); }

double compact_open_norm(const Field& f, int n_max) {
    detail::require(n_max >= 1, "compact-open norm: n_max must be at least 1");
    const Grid& g = f.grid();
    const auto& v = f.values();
    double total = 0.0;
    double running = 0.0;
    int covered = -1;
    double weight = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        weight *= 0.5;
        const int last = g.last_node_at_or_below(static_cast<double>(n));
        for (int i = covered + 1; i <= last; ++i) {
            running = std::max(running, std::abs(v[i]));
        }
        covered = std::max(covered, last);
        total += weight * running;
    }
    return total + weight * sup_norm(f);
}

double compact_open_norm(const Field& f) { return compact_open_norm(f, default_co_terms(f.grid())); }

double segment_sup_norm(const Segment& s) {
    double m = 0.0;
    for (const auto& f : s.frames()) {
        m = std::max(m, sup_norm(f));
    }
    return m;
}

double segment_co_norm(const Segment& s, int n_max) {
    double m = 0.0;
    for (const auto& f : s.frames()) {
        m = std::max(m, compact_open_norm(f, n_max));
    }
    return m;
}

double segment_co_norm(const Segment& s) { return segment_co_norm(s, default_co_terms(s.grid())); }

}  // namespace snrd
