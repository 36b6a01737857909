#include "snrd/runner.hpp"

#include "snrd/semigroup.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace snrd::runner {

namespace {

constexpr std::pair<Experiment, std::string_view> experiment_names[] = {
    {Experiment::kernel_bound, "kernel-bound"},
    {Experiment::semigroup_bounds, "semigroup-bounds"},
    {Experiment::ou_stats, "ou-stats"},
    {Experiment::temperedness, "temperedness"},
    {Experiment::picard_contraction, "picard-contraction"},
    {Experiment::cocycle, "cocycle"},
    {Experiment::absorbing, "absorbing"},
    {Experiment::fixed_point, "fixed-point"},
    {Experiment::convergence_study, "convergence-study"},
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, std::string_view v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        throw ConfigError(key, "malformed real '" + std::string(v) + "'");
    }
    return out;
}

long long parse_integer(const std::string& key, std::string_view v) {
    long long out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError(key, "malformed integer '" + std::string(v) + "'");
    }
    return out;
}

std::vector<std::string_view> split_list(std::string_view v) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = v.find(',');
        out.push_back(trim(v.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        v.remove_prefix(comma + 1);
    }
    return out;
}

double positive(const std::string& key, std::string_view v) {
    const double x = parse_real(key, v);
    if (!(x > 0.0)) {
        throw ConfigError(key, "must be positive");
    }
    return x;
}

int positive_int(const std::string& key, std::string_view v) {
    const long long x = parse_integer(key, v);
    if (x < 1 || x > 100000000) {
        throw ConfigError(key, "must be a positive integer");
    }
    return static_cast<int>(x);
}

bool on_lattice(double span, double dt) {
    const double r = span / dt;
    return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, std::abs(r));
}

void require_lattice(const std::string& key, double span, double dt, const std::string& what) {
    if (!on_lattice(span, dt)) {
        throw ConfigError(key, "must be a whole multiple of " + what);
    }
}

void require_resolved(const ExperimentSpec& spec, double step, const std::string& why) {
    const DirichletSemigroup s(SemigroupParams(spec.model.mu, spec.grid()));
    if (!s.resolved(0.5 * step)) {
        std::ostringstream msg;
        msg << "step " << step << " (" << why << ") is below 2 dx^2 = " << 2.0 * s.min_resolved_time()
            << "; the semigroup half step would not be resolved by the grid (raise dt or N)";
        throw ConfigError("dt", msg.str());
    }
}

void require_solver_lattice(const ExperimentSpec& spec, double step, const std::string& why) {
    require_resolved(spec, step, why);
    if (!on_lattice(spec.model.tau, step)) {
        throw ConfigError("tau", "must be a whole multiple of the step " + std::to_string(step) + " (" + why + ")");
    }
}

}  // namespace

ConfigError::ConfigError(const std::string& key, const std::string& what)
    : ParameterError("config key '" + key + "': " + what), key_(key) {}

std::string_view experiment_name(Experiment e) {
    for (const auto& [id, name] : experiment_names) {
        if (id == e) {
            return name;
        }
    }
    return "unknown";
}

ExperimentSpec parse_config(std::string_view text) {
    std::map<std::string, std::string> entries;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        std::string_view body = line;
        body = trim(body.substr(0, body.find('#')));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        }
        const std::string key(trim(body.substr(0, eq)));
        const std::string value(trim(body.substr(eq + 1)));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no), "empty key");
        }
        if (value.empty()) {
            throw ConfigError(key, "empty value");
        }
        if (!entries.emplace(key, value).second) {
            throw ConfigError(key, "duplicate key");
        }
    }

    ExperimentSpec spec;
    // Value errors in other keys take precedence over a missing or unknown
    // experiment, so they are reported after the setters run.
    std::optional<ConfigError> experiment_error;
    const auto exp_it = entries.find("experiment");
    if (exp_it == entries.end()) {
        experiment_error.emplace("experiment", "missing required key");
    } else {
        bool found = false;
        for (const auto& [id, name] : experiment_names) {
            if (exp_it->second == name) {
                spec.experiment = id;
                found = true;
            }
        }
        if (!found) {
            experiment_error.emplace("experiment", "unknown experiment '" + exp_it->second + "'");
        }
    }

    NonlinearityKind kind = NonlinearityKind::scaled_tanh;
    double l_f = spec.model.f.lipschitz;
    double bound = spec.model.f.bound;
    std::vector<ProfileKind> profile_kinds{ProfileKind::quadratic_exp};
    double amplitude = 1.0;

    // Experiment-dependent defaults, overridden below by explicit keys.
    switch (spec.experiment) {
        case Experiment::kernel_bound:
            spec.trials = 100;
            break;
        case Experiment::semigroup_bounds:
            spec.trials = 20;
            spec.intervals = 400;
            spec.times = {1e-3, 0.1, 0.5, 1.0, 5.0};
            break;
        case Experiment::ou_stats:
            spec.paths = 10000;
            spec.horizon = 1.0;
            break;
        case Experiment::temperedness:
            spec.paths = 1000;
            spec.horizon = 200.0;
            break;
        case Experiment::picard_contraction:
            spec.horizon = 1.0;
            break;
        case Experiment::cocycle:
            spec.paths = 3;
            spec.solver.dt = 0.02;
            spec.model.tau = 0.2;
            break;
        case Experiment::absorbing:
            spec.paths = 20;
            spec.solver.dt = 0.025;
            spec.times = {0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0};
            break;
        case Experiment::fixed_point:
            spec.horizon = 16.0;
            spec.solver.dt = 0.025;
            break;
        case Experiment::convergence_study:
            spec.horizon = 2.0;
            spec.solver.dt = 0.1;
            spec.model.tau = 0.5;
            amplitude = 0.0;
            break;
    }

    using Setter = std::function<void(const std::string&, std::string_view)>;
    const std::map<std::string, Setter> setters = {
        {"experiment", [](const std::string&, std::string_view) {}},
        {"seed",
         [&](const std::string& k, std::string_view v) {
             const long long x = parse_integer(k, v);
             if (x < 0) {
                 throw ConfigError(k, "must be non-negative");
             }
             spec.seed = static_cast<std::uint64_t>(x);
         }},
        {"threads", [&](const std::string& k, std::string_view v) { spec.threads = positive_int(k, v); }},
        {"L", [&](const std::string& k, std::string_view v) { spec.length = positive(k, v); }},
        {"N",
         [&](const std::string& k, std::string_view v) {
             spec.intervals = positive_int(k, v);
             if (spec.intervals < 2) {
                 throw ConfigError(k, "must be at least 2");
             }
         }},
        {"mu", [&](const std::string& k, std::string_view v) { spec.model.mu = positive(k, v); }},
        {"epsilon", [&](const std::string& k, std::string_view v) { spec.model.epsilon = positive(k, v); }},
        {"alpha", [&](const std::string& k, std::string_view v) { spec.model.alpha = positive(k, v); }},
        {"tau", [&](const std::string& k, std::string_view v) { spec.model.tau = positive(k, v); }},
        {"L_f", [&](const std::string& k, std::string_view v) { l_f = positive(k, v); }},
        {"M", [&](const std::string& k, std::string_view v) { bound = positive(k, v); }},
        {"nonlinearity",
         [&](const std::string& k, std::string_view v) {
             if (v == "zero") {
                 kind = NonlinearityKind::zero;
             } else if (v == "scaled-tanh") {
                 kind = NonlinearityKind::scaled_tanh;
             } else if (v == "saturating-linear") {
                 kind = NonlinearityKind::saturating_linear;
             } else {
                 throw ConfigError(k, "expected zero, scaled-tanh or saturating-linear");
             }
         }},
        {"profiles",
         [&](const std::string& k, std::string_view v) {
             profile_kinds.clear();
             for (auto item : split_list(v)) {
                 if (item == "quadratic-exp") {
                     profile_kinds.push_back(ProfileKind::quadratic_exp);
                 } else if (item == "gaussian-odd") {
                     profile_kinds.push_back(ProfileKind::gaussian_odd);
                 } else if (item == "sine-exp") {
                     profile_kinds.push_back(ProfileKind::sine_exp);
                 } else {
                     throw ConfigError(k, "unknown profile '" + std::string(item) +
                                              "' (expected quadratic-exp, gaussian-odd or sine-exp)");
                 }
             }
         }},
        {"noise_amplitude",
         [&](const std::string& k, std::string_view v) {
             amplitude = parse_real(k, v);
             if (amplitude < 0.0) {
                 throw ConfigError(k, "must be non-negative");
             }
         }},
        {"dt", [&](const std::string& k, std::string_view v) { spec.solver.dt = positive(k, v); }},
        {"picard_tol", [&](const std::string& k, std::string_view v) { spec.solver.picard_tol = positive(k, v); }},
        {"picard_max_iter",
         [&](const std::string& k, std::string_view v) { spec.solver.picard_max_iter = positive_int(k, v); }},
        {"picard_window",
         [&](const std::string& k, std::string_view v) { spec.solver.picard_window = positive(k, v); }},
        {"mode",
         [&](const std::string& k, std::string_view v) {
             if (v == "method-of-steps") {
                 spec.solver.mode = SolverMode::method_of_steps;
             } else if (v == "picard") {
                 spec.solver.mode = SolverMode::picard;
             } else {
                 throw ConfigError(k, "expected method-of-steps or picard");
             }
         }},
        {"paths", [&](const std::string& k, std::string_view v) { spec.paths = positive_int(k, v); }},
        {"trials", [&](const std::string& k, std::string_view v) { spec.trials = positive_int(k, v); }},
        {"horizon", [&](const std::string& k, std::string_view v) { spec.horizon = positive(k, v); }},
        {"beta", [&](const std::string& k, std::string_view v) { spec.beta = positive(k, v); }},
        {"dt_path", [&](const std::string& k, std::string_view v) { spec.dt_path = positive(k, v); }},
        {"stride", [&](const std::string& k, std::string_view v) { spec.stride = positive(k, v); }},
        {"t",
         [&](const std::string& k, std::string_view v) {
             spec.t = parse_real(k, v);
             if (spec.t < 0.0) {
                 throw ConfigError(k, "must be non-negative");
             }
         }},
        {"s",
         [&](const std::string& k, std::string_view v) {
             spec.s = parse_real(k, v);
             if (spec.s < 0.0) {
                 throw ConfigError(k, "must be non-negative");
             }
         }},
        {"times",
         [&](const std::string& k, std::string_view v) {
             spec.times.clear();
             for (auto item : split_list(v)) {
                 spec.times.push_back(positive(k, item));
             }
         }},
        {"segments", [&](const std::string& k, std::string_view v) { spec.segments = positive_int(k, v); }},
        {"max_co_norm", [&](const std::string& k, std::string_view v) { spec.max_co_norm = positive(k, v); }},
        {"control_mu", [&](const std::string& k, std::string_view v) { spec.control_mu = positive(k, v); }},
        {"levels",
         [&](const std::string& k, std::string_view v) {
             spec.levels = positive_int(k, v);
             if (spec.levels < 2 || spec.levels > 8) {
                 throw ConfigError(k, "must be between 2 and 8");
             }
         }},
    };

    for (const auto& [key, value] : entries) {
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ConfigError(key, "unknown key");
        }
        it->second(key, value);
    }
    if (experiment_error) {
        throw *experiment_error;
    }

    spec.model.f = Nonlinearity(kind, l_f, bound);
    spec.model.profiles.clear();
    for (auto k : profile_kinds) {
        spec.model.profiles.push_back(NoiseProfile{k, amplitude, spec.length});
    }
    validate_spec(spec);
    return spec;
}

void validate_spec(const ExperimentSpec& spec) {
    (void)spec.grid();
    const ModelParams& m = spec.model;
    const double dt = spec.solver.dt;

    switch (spec.experiment) {
        case Experiment::kernel_bound:
        case Experiment::semigroup_bounds:
            if (spec.experiment == Experiment::semigroup_bounds && spec.times.empty()) {
                throw ConfigError("times", "must list at least one time");
            }
            break;
        case Experiment::ou_stats:
            require_lattice("horizon", spec.horizon, dt, "dt");
            break;
        case Experiment::temperedness:
            require_lattice("horizon", spec.horizon, spec.dt_path, "dt_path");
            require_lattice("stride", spec.stride, spec.dt_path, "dt_path");
            break;
        case Experiment::picard_contraction:
            require_solver_lattice(spec, dt, "solver step");
            require_lattice("horizon", spec.horizon, dt, "dt");
            if (const auto t1 = contraction_interval(m); t1 && !(dt < *t1)) {
                throw ConfigError("dt", "must be smaller than the contraction interval T1 = " + std::to_string(*t1));
            }
            if (spec.solver.picard_window > 0.0 && spec.solver.picard_window < dt) {
                throw ConfigError("picard_window", "must be at least dt");
            }
            break;
        case Experiment::cocycle:
            require_solver_lattice(spec, dt, "solver step");
            require_solver_lattice(spec, 0.5 * dt, "halved step of the cocycle study");
            require_lattice("t", spec.t, dt, "dt");
            require_lattice("s", spec.s, dt, "dt");
            break;
        case Experiment::absorbing: {
            require_solver_lattice(spec, dt, "solver step");
            if (spec.times.empty()) {
                throw ConfigError("times", "must list at least one pullback time");
            }
            for (double t : spec.times) {
                require_lattice("times", t, dt, "dt");
                if (!(t > m.tau)) {
                    throw ConfigError("times", "pullback times must exceed tau");
                }
            }
            if (!m.absorbing_condition()) {
                throw ConditionViolated(
                    "config keys 'epsilon', 'L_f', 'mu', 'tau': absorbing experiment requires "
                    "eps L_f e^{mu tau} - mu < 0");
            }
            break;
        }
        case Experiment::fixed_point:
            require_solver_lattice(spec, dt, "solver step");
            if (!(m.tau < 1.0)) {
                throw ConditionViolated("config key 'tau': fixed-point experiment requires 0 < tau < 1");
            }
            if (!m.unit_time_contraction()) {
                throw ConditionViolated(
                    "config keys 'mu', 'tau', 'epsilon', 'L_f': fixed-point experiment requires "
                    "mu (1 - tau) > eps L_f");
            }
            require_lattice("dt", 1.0, dt, "a divisor of 1");
            if (std::abs(spec.horizon - std::round(spec.horizon)) > 1e-12 || spec.horizon < 2.0) {
                throw ConfigError("horizon", "must be an integer of at least 2");
            }
            break;
        case Experiment::convergence_study: {
            require_solver_lattice(spec, dt, "solver step");
            const double finest = dt / std::pow(2.0, spec.levels);
            require_solver_lattice(spec, finest, "reference step dt / 2^levels");
            require_lattice("horizon", spec.horizon, dt, "dt");
            break;
        }
    }
}

}  // namespace snrd::runner
