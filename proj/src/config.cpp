#include "graphgp/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "graphgp/errors.hpp"

namespace graphgp {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw config_error("unknown key '" + it.key() + "' in " + section);
    }
}

double get_double(const json& obj, const std::string& section, const char* key) {
    const json& value = obj.at(key);
    if (!value.is_number())
        throw config_error(section + "." + key + " must be a number");
    return value.get<double>();
}

long long get_integer(const json& obj, const std::string& section, const char* key) {
    const json& value = obj.at(key);
    if (!value.is_number_integer())
        throw config_error(section + "." + key + " must be an integer");
    return value.get<long long>();
}

std::vector<double> get_number_array(const json& value, const std::string& where) {
    if (!value.is_array())
        throw config_error(where + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(value.size());
    for (const json& item : value) {
        if (!item.is_number())
            throw config_error(where + " must contain only numbers");
        out.push_back(item.get<double>());
    }
    return out;
}

DegreeDistribution parse_ensemble(const json& obj) {
    if (!obj.is_object())
        throw config_error("ensemble must be an object");
    if (!obj.contains("kind"))
        throw config_error("ensemble.kind is required");
    const std::string kind = obj.at("kind").get<std::string>();
    if (kind == "regular") {
        check_keys(obj, "ensemble", {"kind", "degree"});
        return DegreeDistribution::regular(
            static_cast<int>(get_integer(obj, "ensemble", "degree")));
    }
    if (kind == "poisson") {
        check_keys(obj, "ensemble", {"kind", "mean_degree"});
        return DegreeDistribution::poisson(get_double(obj, "ensemble", "mean_degree"));
    }
    if (kind == "pareto_mixed_poisson") {
        check_keys(obj, "ensemble", {"kind", "alpha", "lambda_min"});
        return DegreeDistribution::pareto_mixed_poisson(
            get_double(obj, "ensemble", "alpha"),
            get_double(obj, "ensemble", "lambda_min"));
    }
    if (kind == "empirical") {
        check_keys(obj, "ensemble", {"kind", "weights"});
        if (!obj.contains("weights"))
            throw config_error("ensemble.weights is required for empirical kind");
        return DegreeDistribution::empirical(
            get_number_array(obj.at("weights"), "ensemble.weights"));
    }
    throw config_error("unknown ensemble.kind '" + kind + "'");
}

std::string kind_name(DegreeKind kind) {
    switch (kind) {
    case DegreeKind::regular:
        return "regular";
    case DegreeKind::poisson:
        return "poisson";
    case DegreeKind::pareto_mixed_poisson:
        return "pareto_mixed_poisson";
    case DegreeKind::empirical:
        return "empirical";
    }
    return "unknown";
}

} // namespace

std::string to_string(Method method) {
    switch (method) {
    case Method::simulate:
        return "simulate";
    case Method::cavity_global:
        return "cavity_global";
    case Method::cavity_local:
        return "cavity_local";
    case Method::histogram:
        return "histogram";
    }
    return "unknown";
}

Method method_from_string(const std::string& name) {
    if (name == "simulate")
        return Method::simulate;
    if (name == "cavity_global")
        return Method::cavity_global;
    if (name == "cavity_local")
        return Method::cavity_local;
    if (name == "histogram")
        return Method::histogram;
    throw config_error("unknown method '" + name + "'");
}

ExperimentConfig::ExperimentConfig() : nu_grid(default_nu_grid()) {}

std::vector<double> default_nu_grid() {
    std::vector<double> grid;
    grid.reserve(20);
    for (int k = 0; k < 20; ++k)
        grid.push_back(std::pow(10.0, -2.0 + 3.0 * static_cast<double>(k) / 19.0));
    return grid;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& error) {
        throw config_error(std::string("configuration is not valid JSON: ") +
                           error.what());
    }
    if (!root.is_object())
        throw config_error("configuration root must be a JSON object");
    check_keys(root, "configuration",
               {"ensemble", "kernel", "sigma2", "nu_grid", "nu_values",
                "simulator", "solver", "histogram", "methods", "seed",
                "output_dir"});

    ExperimentConfig config;
    try {
        if (root.contains("ensemble"))
            config.dist = parse_ensemble(root.at("ensemble"));

        if (root.contains("kernel")) {
            const json& kernel = root.at("kernel");
            if (!kernel.is_object())
                throw config_error("kernel must be an object");
            check_keys(kernel, "kernel", {"a", "p", "normalization"});
            if (kernel.contains("a"))
                config.params.a = get_double(kernel, "kernel", "a");
            if (kernel.contains("p"))
                config.params.p = static_cast<int>(get_integer(kernel, "kernel", "p"));
            if (kernel.contains("normalization"))
                config.normalization = normalization_from_string(
                    kernel.at("normalization").get<std::string>());
        }

        if (root.contains("sigma2"))
            config.sigma2_list = get_number_array(root.at("sigma2"), "sigma2");

        if (root.contains("nu_grid") && root.contains("nu_values"))
            throw config_error("specify either nu_grid or nu_values, not both");
        if (root.contains("nu_grid")) {
            const json& grid = root.at("nu_grid");
            if (!grid.is_object())
                throw config_error("nu_grid must be an object");
            check_keys(grid, "nu_grid", {"min", "max", "count"});
            const double lo = get_double(grid, "nu_grid", "min");
            const double hi = get_double(grid, "nu_grid", "max");
            const long long count = get_integer(grid, "nu_grid", "count");
            if (!(lo > 0.0) || !(hi > lo))
                throw config_error("nu_grid requires 0 < min < max");
            if (count < 2 || count > 100000)
                throw config_error("nu_grid.count must be in [2, 100000]");
            config.nu_grid.clear();
            const double log_lo = std::log10(lo);
            const double log_hi = std::log10(hi);
            for (long long k = 0; k < count; ++k)
                config.nu_grid.push_back(std::pow(
                    10.0, log_lo + (log_hi - log_lo) * static_cast<double>(k) /
                                       static_cast<double>(count - 1)));
        }
        if (root.contains("nu_values"))
            config.nu_grid = get_number_array(root.at("nu_values"), "nu_values");

        if (root.contains("simulator")) {
            const json& sim = root.at("simulator");
            if (!sim.is_object())
                throw config_error("simulator must be an object");
            check_keys(sim, "simulator", {"n_vertices", "n_graphs", "n_sets"});
            if (sim.contains("n_vertices"))
                config.simulator.n_vertices =
                    static_cast<int>(get_integer(sim, "simulator", "n_vertices"));
            if (sim.contains("n_graphs"))
                config.simulator.n_graphs =
                    static_cast<int>(get_integer(sim, "simulator", "n_graphs"));
            if (sim.contains("n_sets"))
                config.simulator.n_sets =
                    static_cast<int>(get_integer(sim, "simulator", "n_sets"));
        }

        if (root.contains("solver")) {
            const json& solver = root.at("solver");
            if (!solver.is_object())
                throw config_error("solver must be an object");
            check_keys(solver, "solver",
                       {"population_size", "n_sweeps", "min_sweeps",
                        "epsilon_samples", "calibration_samples",
                        "convergence_samples", "convergence_tol",
                        "convergence_window", "averaging_sweeps",
                        "gamma_tail_margin"});
            SolverSettings& s = config.solver;
            if (solver.contains("population_size"))
                s.population_size =
                    static_cast<int>(get_integer(solver, "solver", "population_size"));
            if (solver.contains("n_sweeps"))
                s.n_sweeps = static_cast<int>(get_integer(solver, "solver", "n_sweeps"));
            if (solver.contains("min_sweeps"))
                s.min_sweeps =
                    static_cast<int>(get_integer(solver, "solver", "min_sweeps"));
            if (solver.contains("epsilon_samples"))
                s.epsilon_samples =
                    static_cast<long>(get_integer(solver, "solver", "epsilon_samples"));
            if (solver.contains("calibration_samples"))
                s.calibration_samples = static_cast<long>(
                    get_integer(solver, "solver", "calibration_samples"));
            if (solver.contains("convergence_samples"))
                s.convergence_samples = static_cast<long>(
                    get_integer(solver, "solver", "convergence_samples"));
            if (solver.contains("convergence_tol"))
                s.convergence_tol = get_double(solver, "solver", "convergence_tol");
            if (solver.contains("convergence_window"))
                s.convergence_window = static_cast<int>(
                    get_integer(solver, "solver", "convergence_window"));
            if (solver.contains("averaging_sweeps"))
                s.averaging_sweeps = static_cast<int>(
                    get_integer(solver, "solver", "averaging_sweeps"));
            if (solver.contains("gamma_tail_margin"))
                s.gamma_tail_margin =
                    get_double(solver, "solver", "gamma_tail_margin");
        }

        if (root.contains("histogram")) {
            const json& hist = root.at("histogram");
            if (!hist.is_object())
                throw config_error("histogram must be an object");
            check_keys(hist, "histogram", {"nu_values", "n_bins", "n_samples"});
            if (hist.contains("nu_values"))
                config.histogram.nu_values =
                    get_number_array(hist.at("nu_values"), "histogram.nu_values");
            if (hist.contains("n_bins"))
                config.histogram.n_bins =
                    static_cast<int>(get_integer(hist, "histogram", "n_bins"));
            if (hist.contains("n_samples"))
                config.histogram.n_samples =
                    static_cast<long>(get_integer(hist, "histogram", "n_samples"));
        }

        if (root.contains("methods")) {
            const json& methods = root.at("methods");
            if (!methods.is_array())
                throw config_error("methods must be an array of strings");
            config.methods.clear();
            for (const json& item : methods) {
                if (!item.is_string())
                    throw config_error("methods must contain only strings");
                config.methods.push_back(method_from_string(item.get<std::string>()));
            }
        }

        if (root.contains("seed")) {
            const json& seed = root.at("seed");
            if (!seed.is_number_integer() ||
                (seed.is_number_integer() && !seed.is_number_unsigned() &&
                 seed.get<long long>() < 0))
                throw config_error("seed must be a nonnegative integer");
            config.seed = seed.get<std::uint64_t>();
        }

        if (root.contains("output_dir")) {
            if (!root.at("output_dir").is_string())
                throw config_error("output_dir must be a string");
            config.output_dir = root.at("output_dir").get<std::string>();
        }
    } catch (const json::exception& error) {
        throw config_error(std::string("configuration error: ") + error.what());
    }

    validate_experiment_config(config);
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open configuration file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config(buffer.str());
}

void validate_experiment_config(const ExperimentConfig& config) {
    try {
        validate_kernel_params(config.params);
    } catch (const std::invalid_argument& error) {
        throw config_error(error.what());
    }
    if (config.sigma2_list.empty())
        throw config_error("sigma2 list must not be empty");
    for (double s : config.sigma2_list)
        if (!(s > 0.0) || !std::isfinite(s))
            throw config_error("sigma2 values must be positive and finite");
    if (config.nu_grid.empty())
        throw config_error("nu grid must not be empty");
    for (std::size_t i = 0; i < config.nu_grid.size(); ++i) {
        const double nu = config.nu_grid[i];
        if (!(nu >= 0.0) || !std::isfinite(nu))
            throw config_error("nu values must be nonnegative and finite");
        if (i > 0 && !(nu > config.nu_grid[i - 1]))
            throw config_error("nu grid must be strictly ascending");
    }
    if (config.simulator.n_vertices < 1)
        throw config_error("simulator.n_vertices must be at least 1");
    if (config.simulator.n_graphs < 1)
        throw config_error("simulator.n_graphs must be at least 1");
    if (config.simulator.n_sets < 1)
        throw config_error("simulator.n_sets must be at least 1");
    validate_solver_settings(config.solver);
    if (config.histogram.n_bins < 1)
        throw config_error("histogram.n_bins must be at least 1");
    if (config.histogram.n_samples < 1)
        throw config_error("histogram.n_samples must be at least 1");
    for (double nu : config.histogram.nu_values)
        if (!(nu >= 0.0) || !std::isfinite(nu))
            throw config_error("histogram.nu_values must be nonnegative and finite");
}

std::string canonical_config_json(const ExperimentConfig& config) {
    json root;
    json ensemble;
    ensemble["kind"] = kind_name(config.dist.kind());
    ensemble["name"] = config.dist.name();
    if (config.dist.kind() == DegreeKind::empirical)
        ensemble["pmf"] = config.dist.pmf();
    root["ensemble"] = ensemble;
    root["kernel"] = {{"a", config.params.a},
                      {"p", config.params.p},
                      {"normalization", to_string(config.normalization)}};
    root["sigma2"] = config.sigma2_list;
    root["nu_values"] = config.nu_grid;
    root["simulator"] = {{"n_vertices", config.simulator.n_vertices},
                         {"n_graphs", config.simulator.n_graphs},
                         {"n_sets", config.simulator.n_sets}};
    root["solver"] = {{"population_size", config.solver.population_size},
                      {"n_sweeps", config.solver.n_sweeps},
                      {"min_sweeps", config.solver.min_sweeps},
                      {"epsilon_samples", config.solver.epsilon_samples},
                      {"calibration_samples", config.solver.calibration_samples},
                      {"convergence_samples", config.solver.convergence_samples},
                      {"convergence_tol", config.solver.convergence_tol},
                      {"convergence_window", config.solver.convergence_window},
                      {"averaging_sweeps", config.solver.averaging_sweeps},
                      {"gamma_tail_margin", config.solver.gamma_tail_margin}};
    root["histogram"] = {{"nu_values", config.histogram.nu_values},
                         {"n_bins", config.histogram.n_bins},
                         {"n_samples", config.histogram.n_samples}};
    json methods = json::array();
    for (Method m : config.methods)
        methods.push_back(to_string(m));
    root["methods"] = methods;
    root["seed"] = config.seed;
    root["output_dir"] = config.output_dir;
    return root.dump();
}

} // namespace graphgp
