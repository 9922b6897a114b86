// Command-line interface: experiment subcommands around the library.
// Exit codes: 0 success, 1 internal error, 2 configuration error,
// 3 tolerance-gate failure, 4 solver non-convergence.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "graphgp/compare.hpp"
#include "graphgp/config.hpp"
#include "graphgp/csv.hpp"
#include "graphgp/errors.hpp"
#include "graphgp/experiment.hpp"
#include "graphgp/format.hpp"
#include "graphgp/graph.hpp"
#include "graphgp/rng.hpp"

namespace {

constexpr std::uint64_t kSaltSampleGraph = 0x35;

struct CommonOptions {
    std::string config_path;
    std::string out;
    std::string methods;
    std::uint64_t seed = 0;
    int threads = 0;
};

std::vector<graphgp::Method> parse_method_list(const std::string& text) {
    std::vector<graphgp::Method> methods;
    std::string::size_type start = 0;
    while (start <= text.size()) {
        const std::string::size_type comma = text.find(',', start);
        const std::string item =
            comma == std::string::npos ? text.substr(start)
                                       : text.substr(start, comma - start);
        if (item.empty())
            throw graphgp::config_error("empty entry in method list '" + text +
                                        "'");
        methods.push_back(graphgp::method_from_string(item));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return methods;
}

graphgp::ExperimentConfig load_config(const CommonOptions& options,
                                      bool seed_given) {
    graphgp::ExperimentConfig config =
        options.config_path.empty()
            ? graphgp::ExperimentConfig{}
            : graphgp::load_experiment_config(options.config_path);
    if (seed_given)
        config.seed = options.seed;
    if (!options.out.empty())
        config.output_dir = options.out;
    if (!options.methods.empty())
        config.methods = parse_method_list(options.methods);
    return config;
}

int run_experiment_command(const CommonOptions& options, bool seed_given,
                           graphgp::Method default_method) {
    graphgp::ExperimentConfig config = load_config(options, seed_given);
    if (config.methods.empty())
        config.methods = {default_method};

    const graphgp::ExperimentResult result =
        graphgp::run_experiment(config, options.threads);
    if (result.manifest.kappa_valid)
        std::cout << "calibrated kappa = "
                  << graphgp::format_double(result.manifest.kappa_hat) << "\n";
    for (const std::string& file : result.output_files)
        std::cout << "wrote " << file << "\n";
    if (!result.all_converged) {
        std::cerr << "warning: at least one solver run did not converge; see "
                     "the manifest for diagnostics\n";
        return 4;
    }
    return 0;
}

int run_sample_graph(const CommonOptions& options, bool seed_given) {
    graphgp::ExperimentConfig config = load_config(options, seed_given);
    const std::string path = options.out.empty() ? "graph.txt" : options.out;
    graphgp::rng_t rng(graphgp::derive_seed(config.seed, kSaltSampleGraph));
    const graphgp::Graph graph = graphgp::sample_graph(
        config.dist, config.simulator.n_vertices, rng);
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    graphgp::write_graph(graph, out);
    if (!out)
        throw std::runtime_error("failed while writing '" + path + "'");
    std::cout << "wrote graph with " << graph.n_vertices << " vertices and "
              << graph.n_edges() << " edges to " << path << "\n";
    return 0;
}

int run_compare(const std::string& file_a, const std::string& file_b,
                double tolerance, bool tolerance_given,
                const std::string& report_path) {
    const std::vector<graphgp::CurveRow> rows_a = graphgp::read_curve_csv(file_a);
    const std::vector<graphgp::CurveRow> rows_b = graphgp::read_curve_csv(file_b);
    const graphgp::CompareReport report =
        graphgp::compare_curves(rows_a, rows_b);
    const std::string text = graphgp::format_compare_report(report);
    std::cout << text;
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out)
            throw std::runtime_error("cannot open '" + report_path +
                                     "' for writing");
        out << text;
    }
    if (tolerance_given && !(report.max_rel_dev <= tolerance)) {
        std::cerr << "tolerance gate failed: max relative deviation "
                  << graphgp::format_double(report.max_rel_dev) << " > "
                  << graphgp::format_double(tolerance) << "\n";
        return 3;
    }
    return 0;
}

void add_common_options(CLI::App* sub, CommonOptions& options) {
    sub->add_option("--config", options.config_path,
                    "JSON configuration file (defaults used when omitted)");
    sub->add_option("--seed", options.seed, "override the experiment seed");
    sub->add_option("--out", options.out, "output directory");
    sub->add_option("--method", options.methods,
                    "comma-separated method list overriding the default "
                    "(simulate, cavity_global, cavity_local, histogram)");
    sub->add_option("--threads", options.threads,
                    "worker threads (0 = auto, 1 = serial)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"learning curves for Gaussian-process regression with "
                 "random-walk kernels on sparse random graphs"};
    app.require_subcommand(1);

    CommonOptions options;

    CLI::App* sample_graph_cmd = app.add_subcommand(
        "sample-graph", "sample one graph from the configured ensemble and "
                        "write it as an edge list (--out is a file path)");
    sample_graph_cmd->add_option("--config", options.config_path,
                                 "JSON configuration file");
    sample_graph_cmd->add_option("--seed", options.seed,
                                 "override the experiment seed");
    sample_graph_cmd->add_option("--out", options.out,
                                 "output file path (default graph.txt)");

    CLI::App* simulate_cmd = app.add_subcommand(
        "simulate", "exact GP learning curves on sampled finite graphs");
    add_common_options(simulate_cmd, options);
    CLI::App* predict_global_cmd = app.add_subcommand(
        "predict-global",
        "cavity prediction for the globally normalized kernel");
    add_common_options(predict_global_cmd, options);
    CLI::App* predict_local_cmd = app.add_subcommand(
        "predict-local", "cavity prediction for the locally normalized kernel");
    add_common_options(predict_local_cmd, options);
    CLI::App* histogram_cmd = app.add_subcommand(
        "histogram", "population histograms for the globally normalized kernel");
    add_common_options(histogram_cmd, options);

    std::string compare_a;
    std::string compare_b;
    double tolerance = 0.0;
    std::string report_path;
    CLI::App* compare_cmd = app.add_subcommand(
        "compare", "per-key relative deviations between two curve CSVs "
                   "(file B is the reference)");
    compare_cmd->add_option("file_a", compare_a, "first curve CSV")->required();
    compare_cmd->add_option("file_b", compare_b, "reference curve CSV")
        ->required();
    CLI::Option* tolerance_option = compare_cmd->add_option(
        "--tolerance", tolerance,
        "fail (exit 3) when the max relative deviation exceeds this");
    compare_cmd->add_option("--out", report_path, "also write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error);
        return code == 0 ? 0 : 2;
    }

    try {
        const bool seed_given =
            sample_graph_cmd->count("--seed") > 0 ||
            simulate_cmd->count("--seed") > 0 ||
            predict_global_cmd->count("--seed") > 0 ||
            predict_local_cmd->count("--seed") > 0 ||
            histogram_cmd->count("--seed") > 0;
        if (sample_graph_cmd->parsed())
            return run_sample_graph(options, seed_given);
        if (simulate_cmd->parsed())
            return run_experiment_command(options, seed_given,
                                          graphgp::Method::simulate);
        if (predict_global_cmd->parsed())
            return run_experiment_command(options, seed_given,
                                          graphgp::Method::cavity_global);
        if (predict_local_cmd->parsed())
            return run_experiment_command(options, seed_given,
                                          graphgp::Method::cavity_local);
        if (histogram_cmd->parsed())
            return run_experiment_command(options, seed_given,
                                          graphgp::Method::histogram);
        if (compare_cmd->parsed())
            return run_compare(compare_a, compare_b, tolerance,
                               tolerance_option->count() > 0, report_path);
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const graphgp::config_error& error) {
        std::cerr << "config error: " << error.what() << "\n";
        return 2;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
}
