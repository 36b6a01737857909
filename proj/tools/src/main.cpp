#include "snrd/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read config file " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    namespace r = snrd::runner;
    CLI::App app{"Stochastic nonlocal delayed reaction-diffusion experiments"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir;
    long long seed = -1;

    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("--config", config, "Config file (key = value lines)")->required();
    run->add_option("--out", out_dir, "Output directory (default: $SNRD_OUTPUT_DIR or .)");
    run->add_option("--seed", seed, "Override the config seed")->check(CLI::NonNegativeNumber);

    auto* validate = app.add_subcommand("validate", "Parse and validate a config file");
    validate->add_option("--config", config, "Config file (key = value lines)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : r::exit_usage;
    }

    try {
        r::ExperimentSpec spec = r::parse_config(read_file(config));
        if (validate->parsed()) {
            std::cout << "ok: " << r::experiment_name(spec.experiment) << '\n';
            return r::exit_pass;
        }
        if (seed >= 0) {
            spec.seed = static_cast<std::uint64_t>(seed);
        }
        if (out_dir.empty()) {
            const char* env = std::getenv("SNRD_OUTPUT_DIR");
            out_dir = env != nullptr && *env != '\0' ? env : ".";
        }
        return r::run_experiment(spec, out_dir, std::cout);
    } catch (const snrd::ConditionViolated& e) {
        std::cerr << "condition violated: " << e.what() << '\n';
        return r::exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return r::exit_usage;
    }
}
