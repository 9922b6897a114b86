// Experiment configuration: defaults, strict JSON loading, and the canonical
// serialization used for manifest hashing.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphgp/cavity_global.hpp"
#include "graphgp/degree_distribution.hpp"
#include "graphgp/kernel.hpp"

namespace graphgp {

struct SimulatorSettings {
    int n_vertices = 500;
    int n_graphs = 10;
    int n_sets = 10;
};

struct HistogramSettings {
    std::vector<double> nu_values = {0.0, 1e-4, 10.0};
    int n_bins = 160;
    long n_samples = 200000;
};

enum class Method { simulate, cavity_global, cavity_local, histogram };

std::string to_string(Method method);
Method method_from_string(const std::string& name); // config_error on unknown

struct ExperimentConfig {
    DegreeDistribution dist = DegreeDistribution::poisson(3.0);
    KernelParams params;                              // a = 2, p = 10
    Normalization normalization = Normalization::global;
    std::vector<double> sigma2_list = {0.1, 0.01, 0.001, 0.0001};
    std::vector<double> nu_grid;                      // default: default_nu_grid()
    SimulatorSettings simulator;
    SolverSettings solver;
    HistogramSettings histogram;
    std::vector<Method> methods;                      // empty: subcommand default
    std::uint64_t seed = 1;
    std::string output_dir = "out";

    ExperimentConfig();
};

// 20 points log-spaced over [1e-2, 10].
std::vector<double> default_nu_grid();

// Throws config_error on unreadable files, malformed JSON, unknown keys, or
// invalid values. Every section is optional and falls back to the defaults
// above.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);

// Full configuration as sorted-key JSON; the manifest embeds this and hashes
// it, so a manifest plus the seed reproduces a run exactly.
std::string canonical_config_json(const ExperimentConfig& config);

void validate_experiment_config(const ExperimentConfig& config);

} // namespace graphgp
