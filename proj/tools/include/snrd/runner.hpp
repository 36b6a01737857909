#pragma once

#include "snrd/errors.hpp"
#include "snrd/grid.hpp"
#include "snrd/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace snrd::runner {

enum class Experiment {
    kernel_bound,
    semigroup_bounds,
    ou_stats,
    temperedness,
    picard_contraction,
    cocycle,
    absorbing,
    fixed_point,
    convergence_study,
};

std::string_view experiment_name(Experiment e);

/// Malformed, missing, unknown or invalid configuration entry. The message
/// starts with the offending key.
class ConfigError : public ParameterError {
public:
    ConfigError(const std::string& key, const std::string& what);
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct ExperimentSpec {
    Experiment experiment = Experiment::kernel_bound;
    ModelParams model;
    SolverConfig solver;
    double length = 20.0;
    int intervals = 200;
    std::uint64_t seed = 1;
    int threads = 1;

    int paths = 1;
    int trials = 100;
    double horizon = 1.0;
    double beta = 0.1;
    double dt_path = 0.1;
    double stride = 1.0;
    double t = 1.0;
    double s = 1.0;
    std::vector<double> times;
    int segments = 5;
    double max_co_norm = 10.0;
    double control_mu = 0.0;
    int levels = 3;

    Grid grid() const { return Grid(length, intervals); }
};

/// Flat "key = value" text with '#' comments. Only `experiment` is
/// required; every other key has a default (some depend on the experiment).
/// Experiment preconditions are checked before returning.
ExperimentSpec parse_config(std::string_view text);

/// Experiment-specific preconditions; throws ConfigError or ConditionViolated.
void validate_spec(const ExperimentSpec& spec);

/// One CSV row; NaN entries are written as empty cells.
struct Row {
    double t;
    double sup_norm;
    double co_norm;
    double radius;
    double ratio;
    double fitted_rate;
};

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

struct ExperimentResult {
    std::vector<Row> rows;
    std::vector<Check> checks;
    /// Reported quantities that are not asserted.
    std::vector<std::string> notes;

    bool passed() const;
};

ExperimentResult compute_experiment(const ExperimentSpec& spec);

/// Header plus one line per row, numbers as %.17g.
std::string render_csv(Experiment e, const std::vector<Row>& rows);

enum ExitCode : int { exit_pass = 0, exit_assertion = 1, exit_usage = 2 };

/// Runs the experiment, writes <out_dir>/<experiment>.csv and one
/// PASS/FAIL line per check (and REPORT lines) to `log`.
int run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir, std::ostream& log);

/// Smooth bounded field sum_k a_k sin(b_k x) e^{-c_k x} with random
/// coefficients; vanishes at 0 and decays. Deterministic in seed.
Field smooth_test_field(const Grid& grid, std::uint64_t seed);

/// a e x e^{-x}: peak a at x = 1, compact-open norm |a|.
Field bump_field(const Grid& grid, double amplitude);

}  // namespace snrd::runner
