// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: snrd_acceptance [criterion ...]   (default: all)

#include "snrd/attractor.hpp"
#include "snrd/runner.hpp"
#include "snrd/semigroup.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace snrd;
namespace r = snrd::runner;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

r::ExperimentSpec shipped(const std::string& name, const std::string& extra = "") {
    std::string text = read_text(std::filesystem::path(SNRD_CONFIG_DIR) / (name + ".cfg"));
    // Later keys replace earlier ones.
    std::istringstream lines(extra);
    for (std::string kv; std::getline(lines, kv);) {
        const std::string key = kv.substr(0, kv.find('='));
        std::istringstream in(text);
        std::string kept;
        for (std::string line; std::getline(in, line);) {
            const auto k = line.substr(0, line.find('='));
            auto trim = [](std::string s) {
                s.erase(0, s.find_first_not_of(" \t"));
                s.erase(s.find_last_not_of(" \t") + 1);
                return s;
            };
            if (trim(k) != trim(key)) {
                kept += line + '\n';
            }
        }
        text = kept + kv + '\n';
    }
    return r::parse_config(text);
}

Outcome run_checks(const r::ExperimentSpec& spec, const std::string& label) {
    const r::ExperimentResult res = r::compute_experiment(spec);
    Outcome o{true, ""};
    for (const auto& c : res.checks) {
        if (!c.pass) {
            o.pass = false;
        }
        o.detail += "\n    " + std::string(c.pass ? "ok   " : "FAIL ") + label + " " + c.name + ": " + c.detail;
    }
    for (const auto& n : res.notes) {
        o.detail += "\n    note " + label + " " + n;
    }
    return o;
}

Outcome merge(std::vector<Outcome> parts) {
    Outcome o{true, ""};
    for (auto& p : parts) {
        o.pass = o.pass && p.pass;
        o.detail += p.detail;
    }
    return o;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

Outcome kernel_bound() {
    std::vector<Outcome> parts;
    for (const char* alpha : {"0.25", "1", "4"}) {
        parts.push_back(run_checks(shipped("kernel-bound", std::string("alpha = ") + alpha),
                                   std::string("alpha=") + alpha + " L=20"));
        parts.push_back(run_checks(shipped("kernel-bound", std::string("alpha = ") + alpha + "\nL = 40\nN = 400"),
                                   std::string("alpha=") + alpha + " L=40"));
    }
    return merge(std::move(parts));
}

Outcome semigroup_bounds() {
    std::vector<Outcome> parts;
    for (const char* mu : {"0.5", "1", "2"}) {
        parts.push_back(run_checks(shipped("semigroup-bounds", std::string("mu = ") + mu), std::string("mu=") + mu));
    }
    return merge(std::move(parts));
}

std::vector<std::function<double(double)>> smooth_family() {
    return {
        [](double x) { return x * std::exp(-x * x / 4.0); },
        [](double x) { return x * std::exp(-x * x); },
        [](double x) { return std::sin(0.8 * x) * std::exp(-x * x / 8.0); },
        [](double x) { return x * x * x * std::exp(-x * x / 2.0); },
        [](double x) { return std::tanh(x) * std::exp(-x * x / 16.0); },
    };
}

Outcome semigroup_law() {
    const Grid grid(20.0, 200);
    double worst = 0.0;
    for (double mu : {0.5, 1.0, 2.0}) {
        const SemigroupParams p(mu, grid);
        for (const auto& fn : smooth_family()) {
            const Field f = Field::sample(grid, fn);
            for (double t : {0.1, 0.5, 1.0}) {
                for (double s : {0.1, 0.5, 1.0}) {
                    worst = std::max(worst, sup_norm(apply_S(p, t + s, f) - apply_S(p, t, apply_S(p, s, f))));
                }
            }
        }
    }
    return {worst <= 1e-6, fmt("max |S(t+s)f - S(t)S(s)f| = %.3g (bound 1e-6)", worst)};
}

Outcome closed_form() {
    // x e^{-x^2/(4a)} -> e^{-mu t} (a/(a+t))^{3/2} x e^{-x^2/(4(a+t))}.
    const Grid grid(20.0, 200);
    const double t = 0.5;
    double worst = 0.0;
    for (double mu : {0.5, 1.0, 2.0}) {
        for (double a : {0.5, 1.0, 2.0}) {
            const Field u0 = Field::sample(grid, [&](double x) { return x * std::exp(-x * x / (4.0 * a)); });
            const Field exact = Field::sample(grid, [&](double x) {
                return std::exp(-mu * t) * std::pow(a / (a + t), 1.5) * x * std::exp(-x * x / (4.0 * (a + t)));
            });
            const Field got = apply_S(SemigroupParams(mu, grid), t, u0);
            worst = std::max(worst, sup_norm(got - exact) / sup_norm(exact));
        }
    }
    return {worst <= 1e-4, fmt("max relative sup error at t = 0.5: %.3g (bound 1e-4)", worst)};
}

Outcome pullback_bound_check() {
    const Grid grid(20.0, 200);
    SolverConfig cfg;
    cfg.dt = 0.025;
    double worst = -1e300;
    long runs = 0;
    bool all = true;
    for (double eps : {0.5, 1.0}) {
        for (double m : {0.5, 1.0}) {
            const ModelParams p(2.0, eps, 1.0, 0.25, Nonlinearity(NonlinearityKind::scaled_tanh, 1.0, m),
                                {NoiseProfile{ProfileKind::quadratic_exp, 1.0, grid.length()},
                                 NoiseProfile{ProfileKind::gaussian_odd, 0.5, grid.length()}});
            const DelaySolver solver(p, cfg, grid);
            const OUKernel ou(OUParams(p.mu), cfg.dt);
            const double c = profile_constant(p, grid);
            for (std::uint64_t path = 0; path < 5; ++path) {
                const WienerPath w = sample_wiener(2, -40.0, 0.5, cfg.dt, ensemble_seed(31, path));
                for (double amp : {1.0, 5.0}) {
                    const Segment phi = Segment::constant(grid, p.tau, cfg.dt, r::bump_field(grid, amp));
                    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
                        const PullbackRun run = pullback_solve(solver, phi, w, t);
                        const double rhat = tempered_bound(w, ou, -t - p.tau, 0.0);
                        const double bound = sup_norm(run.psi.head()) + (m + c * rhat) * (2.0 / p.mu) + 1e-4;
                        const double lhs = sup_norm(run.v_segment.head());
                        all = all && lhs <= bound;
                        worst = std::max(worst, lhs / bound);
                        ++runs;
                    }
                }
            }
        }
    }
    return {all, fmt("max |v(t)| / bound = %.4g over %g pullback runs", worst, static_cast<double>(runs))};
}

Outcome determinism() {
    const auto base = std::filesystem::temp_directory_path() / ("snrd_acceptance_" + std::to_string(::getpid()));
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"kernel-bound", ""},
        {"semigroup-bounds", "trials = 4"},
        {"ou-stats", "paths = 500"},
        {"temperedness", "paths = 50"},
        {"picard-contraction", ""},
        {"cocycle", "paths = 1"},
        {"absorbing", "paths = 2\nsegments = 2"},
        {"fixed-point", "horizon = 6"},
        {"convergence-study", ""},
    };
    Outcome o{true, ""};
    for (const auto& [name, extra] : runs) {
        r::ExperimentSpec spec = shipped(name, extra);
        std::ostringstream sink;
        std::string csv[3];
        for (int i = 0; i < 3; ++i) {
            spec.threads = i == 2 ? 3 : 1;
            const auto dir = base / std::to_string(i);
            r::run_experiment(spec, dir, sink);
            csv[i] = read_text(dir / (name + ".csv"));
        }
        const bool same = !csv[0].empty() && csv[0] == csv[1] && csv[0] == csv[2];
        o.pass = o.pass && same;
        o.detail += "\n    " + std::string(same ? "ok   " : "FAIL ") + name + ": " +
                    std::to_string(csv[0].size()) + " bytes, identical across reruns and thread counts";
    }
    std::filesystem::remove_all(base);
    return o;
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {"kernel bound", kernel_bound},
        {"semigroup bounds", semigroup_bounds},
        {"semigroup law", semigroup_law},
        {"closed-form oracle", closed_form},
        {"OU statistics", [] { return run_checks(shipped("ou-stats"), "ou-stats"); }},
        {"temperedness", [] { return run_checks(shipped("temperedness"), "temperedness"); }},
        {"Picard contraction", [] { return run_checks(shipped("picard-contraction"), "picard"); }},
        {"cocycle", [] { return run_checks(shipped("cocycle"), "cocycle"); }},
        {"pullback bound", pullback_bound_check},
        {"absorption", [] { return run_checks(shipped("absorbing"), "absorbing"); }},
        {"exponential fixed point", [] { return run_checks(shipped("fixed-point"), "fixed-point"); }},
        {"determinism", determinism},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int k = std::atoi(argv[i]);
        if (k < 1 || k > static_cast<int>(criteria.size())) {
            std::cerr << "unknown criterion " << argv[i] << '\n';
            return 2;
        }
        selected.push_back(k);
    }
    if (selected.empty()) {
        for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) {
            selected.push_back(k);
        }
    }
    int failed = 0;
    for (int k : selected) {
        const Criterion& c = criteria[static_cast<std::size_t>(k - 1)];
        Outcome o{false, ""};
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("\n    exception: ") + e.what()};
        }
        char id[8];
        std::snprintf(id, sizeof id, "%02d", k);
        const char* sep = !o.detail.empty() && o.detail.front() == '\n' ? "" : " -- ";
        std::cout << (o.pass ? "PASS " : "FAIL ") << id << ' ' << c.name << sep << o.detail << std::endl;
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
