#include "graphgp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <thread>

#include "graphgp/cavity_global.hpp"
#include "graphgp/cavity_local.hpp"
#include "graphgp/errors.hpp"
#include "graphgp/exact_gp.hpp"
#include "graphgp/format.hpp"

namespace graphgp {

namespace {

// Method identifiers entering per-point seed derivation.
constexpr std::uint64_t kMethodSaltSimulate = 1;
constexpr std::uint64_t kMethodSaltCavityGlobal = 2;
constexpr std::uint64_t kMethodSaltCavityLocal = 3;
constexpr std::uint64_t kMethodSaltHistogram = 4;
constexpr std::uint64_t kSaltCalibration = 0x31;
constexpr std::uint64_t kSaltStats = 0x34;

struct TaskOutput {
    std::vector<CurveRow> rows;
    std::vector<PointRecord> points;
    std::vector<NamedHistogram> histograms;
    std::string histogram_file; // file name, set only for histogram tasks
};

PointRecord record_from_diagnostics(const std::string& method, double sigma2,
                                    double nu, std::uint64_t seed,
                                    const PopulationDiagnostics& diagnostics,
                                    long n_samples, long discarded) {
    PointRecord record;
    record.method = method;
    record.sigma2 = sigma2;
    record.nu = nu;
    record.seed = seed;
    record.n_samples = n_samples;
    record.sweeps_run = diagnostics.sweeps_run;
    record.converged = diagnostics.converged;
    record.failed_updates = diagnostics.failed_updates;
    record.nonpositive_normalizer = diagnostics.nonpositive_normalizer;
    record.nonpositive_m00 = diagnostics.nonpositive_m00;
    record.annihilation_violations = diagnostics.annihilation_violations;
    record.discarded = discarded;
    return record;
}

void run_task_list(std::vector<std::function<void()>>& tasks, int n_threads) {
    const std::size_t n_tasks = tasks.size();
    if (n_tasks == 0)
        return;
    unsigned hardware = std::thread::hardware_concurrency();
    if (hardware == 0)
        hardware = 1;
    std::size_t pool_size =
        n_threads == 0 ? static_cast<std::size_t>(hardware)
                       : static_cast<std::size_t>(n_threads);
    pool_size = std::min(pool_size, n_tasks);

    std::vector<std::exception_ptr> errors(n_tasks);
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        while (true) {
            const std::size_t index = next.fetch_add(1);
            if (index >= n_tasks)
                break;
            try {
                tasks[index]();
            } catch (...) {
                errors[index] = std::current_exception();
            }
        }
    };
    if (pool_size <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(pool_size);
        for (std::size_t i = 0; i < pool_size; ++i)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
    }
    for (const std::exception_ptr& error : errors)
        if (error)
            std::rethrow_exception(error);
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, int n_threads) {
    validate_experiment_config(config);
    if (config.methods.empty())
        throw config_error("no methods requested");
    for (std::size_t i = 0; i < config.methods.size(); ++i)
        for (std::size_t j = i + 1; j < config.methods.size(); ++j)
            if (config.methods[i] == config.methods[j])
                throw config_error("method '" + to_string(config.methods[i]) +
                                   "' listed more than once");
    if (n_threads < 0)
        throw config_error("threads must be nonnegative");

    std::filesystem::create_directories(config.output_dir);

    ExperimentResult result;
    result.manifest.config = config;

    const bool need_kappa =
        std::find(config.methods.begin(), config.methods.end(),
                  Method::cavity_global) != config.methods.end() ||
        std::find(config.methods.begin(), config.methods.end(),
                  Method::histogram) != config.methods.end();
    double kappa_hat = 1.0;
    if (need_kappa) {
        PopulationDiagnostics calibration_diagnostics;
        const std::uint64_t calibration_seed =
            derive_seed(config.seed, kSaltCalibration);
        kappa_hat = calibrate_kappa(config.dist, config.params,
                                    config.sigma2_list.front(), config.solver,
                                    calibration_seed, &calibration_diagnostics);
        if (!(kappa_hat > 0.0) || !std::isfinite(kappa_hat))
            throw std::runtime_error(
                "calibration produced a nonpositive normalizer");
        result.manifest.kappa_hat = kappa_hat;
        result.manifest.kappa_valid = true;
        result.manifest.points.push_back(record_from_diagnostics(
            "calibration", config.sigma2_list.front(), 0.0, calibration_seed,
            calibration_diagnostics, config.solver.calibration_samples, 0));
    }

    // One output slot per task; tasks only touch their own slot, so the
    // collation below is deterministic regardless of scheduling.
    std::vector<std::function<void()>> tasks;
    std::vector<TaskOutput> outputs;
    // Tasks push closures capturing output indices; reserve to keep
    // references stable while building.
    const std::size_t n_sigma = config.sigma2_list.size();
    const std::size_t n_nu = config.nu_grid.size();
    std::size_t n_task_estimate = 0;
    for (Method method : config.methods) {
        if (method == Method::simulate)
            n_task_estimate += n_sigma;
        else if (method == Method::histogram)
            n_task_estimate += config.histogram.nu_values.size();
        else
            n_task_estimate += n_sigma * n_nu;
    }
    outputs.resize(n_task_estimate);
    tasks.reserve(n_task_estimate);

    const std::string ensemble_name = config.dist.name();
    std::size_t slot = 0;
    for (Method method : config.methods) {
        if (method == Method::simulate) {
            for (std::size_t si = 0; si < n_sigma; ++si) {
                const std::uint64_t task_seed =
                    derive_seed(config.seed, kMethodSaltSimulate, si);
                const double sigma2 = config.sigma2_list[si];
                TaskOutput* out = &outputs[slot++];
                tasks.push_back([&config, ensemble_name, task_seed, sigma2,
                                 out]() {
                    rng_t rng(task_seed);
                    const std::vector<LearningCurvePoint> curve =
                        simulate_learning_curve(
                            config.dist, config.simulator.n_vertices,
                            config.params, config.normalization, sigma2,
                            config.nu_grid, config.simulator.n_graphs,
                            config.simulator.n_sets, rng);
                    for (const LearningCurvePoint& point : curve) {
                        CurveRow row;
                        row.method = "simulate";
                        row.ensemble = ensemble_name;
                        row.normalization = to_string(config.normalization);
                        row.a = config.params.a;
                        row.p = config.params.p;
                        row.sigma2 = sigma2;
                        row.nu = point.nu;
                        row.epsilon = point.epsilon;
                        row.std_err = point.std_err;
                        row.n_samples = point.n_samples;
                        row.seed = task_seed;
                        out->rows.push_back(row);

                        PointRecord record;
                        record.method = "simulate";
                        record.sigma2 = sigma2;
                        record.nu = point.nu;
                        record.seed = task_seed;
                        record.n_samples = point.n_samples;
                        out->points.push_back(record);
                    }
                });
            }
        } else if (method == Method::cavity_global) {
            for (std::size_t si = 0; si < n_sigma; ++si) {
                for (std::size_t ni = 0; ni < n_nu; ++ni) {
                    const std::uint64_t point_seed =
                        derive_seed(config.seed, kMethodSaltCavityGlobal, si, ni);
                    const double sigma2 = config.sigma2_list[si];
                    const double nu = config.nu_grid[ni];
                    TaskOutput* out = &outputs[slot++];
                    tasks.push_back([&config, ensemble_name, point_seed, sigma2,
                                     nu, kappa_hat, out]() {
                        GlobalSolverConfig solver_config;
                        solver_config.dist = config.dist;
                        solver_config.params = config.params;
                        solver_config.sigma2 = sigma2;
                        solver_config.nu = nu;
                        solver_config.kappa = kappa_hat;
                        solver_config.settings = config.solver;
                        solver_config.seed = point_seed;
                        const GlobalSolution solution =
                            solve_global(solver_config);
                        const EpsilonEstimate& estimate = solution.estimate;

                        CurveRow row;
                        row.method = "cavity_global";
                        row.ensemble = ensemble_name;
                        row.normalization = to_string(Normalization::global);
                        row.a = config.params.a;
                        row.p = config.params.p;
                        row.sigma2 = sigma2;
                        row.nu = nu;
                        row.epsilon = estimate.epsilon;
                        row.std_err = estimate.std_err;
                        row.n_samples = estimate.n_samples;
                        row.seed = point_seed;
                        out->rows.push_back(row);
                        out->points.push_back(record_from_diagnostics(
                            "cavity_global", sigma2, nu, point_seed,
                            solution.population.diagnostics, estimate.n_samples,
                            estimate.discarded));
                    });
                }
            }
        } else if (method == Method::cavity_local) {
            for (std::size_t si = 0; si < n_sigma; ++si) {
                for (std::size_t ni = 0; ni < n_nu; ++ni) {
                    const std::uint64_t point_seed =
                        derive_seed(config.seed, kMethodSaltCavityLocal, si, ni);
                    const double sigma2 = config.sigma2_list[si];
                    const double nu = config.nu_grid[ni];
                    TaskOutput* out = &outputs[slot++];
                    tasks.push_back([&config, ensemble_name, point_seed, sigma2,
                                     nu, out]() {
                        LocalSolverConfig solver_config;
                        solver_config.dist = config.dist;
                        solver_config.params = config.params;
                        solver_config.sigma2 = sigma2;
                        solver_config.nu = nu;
                        solver_config.settings = config.solver;
                        solver_config.seed = point_seed;
                        const LocalSolution solution = solve_local(solver_config);
                        const EpsilonEstimate& estimate = solution.estimate;

                        CurveRow row;
                        row.method = "cavity_local";
                        row.ensemble = ensemble_name;
                        row.normalization = to_string(Normalization::local);
                        row.a = config.params.a;
                        row.p = config.params.p;
                        row.sigma2 = sigma2;
                        row.nu = nu;
                        row.epsilon = estimate.epsilon;
                        row.std_err = estimate.std_err;
                        row.n_samples = estimate.n_samples;
                        row.seed = point_seed;
                        out->rows.push_back(row);
                        out->points.push_back(record_from_diagnostics(
                            "cavity_local", sigma2, nu, point_seed,
                            solution.population.diagnostics, estimate.n_samples,
                            estimate.discarded));
                    });
                }
            }
        } else { // Method::histogram
            for (std::size_t ni = 0; ni < config.histogram.nu_values.size();
                 ++ni) {
                const std::uint64_t point_seed =
                    derive_seed(config.seed, kMethodSaltHistogram, ni);
                const double sigma2 = config.sigma2_list.front();
                const double nu = config.histogram.nu_values[ni];
                TaskOutput* out = &outputs[slot++];
                tasks.push_back([&config, point_seed, sigma2, nu, kappa_hat,
                                 out]() {
                    GlobalSolverConfig solver_config;
                    solver_config.dist = config.dist;
                    solver_config.params = config.params;
                    solver_config.sigma2 = sigma2;
                    solver_config.nu = nu;
                    solver_config.kappa = kappa_hat;
                    solver_config.settings = config.solver;
                    solver_config.seed = point_seed;
                    GlobalPopulation population =
                        run_population_global(solver_config);
                    rng_t stats_rng(derive_seed(point_seed, kSaltStats));
                    const PopulationStats stats = export_population_stats(
                        population, config.dist, nu, kappa_hat, sigma2,
                        config.histogram.n_samples, config.histogram.n_bins,
                        stats_rng);
                    out->histograms.push_back({"raw_v00", stats.raw_v00});
                    out->histograms.push_back(
                        {"proxy_variance", stats.proxy_variance});
                    out->histogram_file =
                        "histogram_nu_" + format_double(nu) + ".csv";
                    out->points.push_back(record_from_diagnostics(
                        "histogram", sigma2, nu, point_seed,
                        population.diagnostics, config.histogram.n_samples, 0));
                });
            }
        }
    }

    run_task_list(tasks, n_threads);

    // Collate in task-construction order and write per-method CSVs.
    const std::filesystem::path out_dir(config.output_dir);
    std::size_t cursor = 0;
    for (Method method : config.methods) {
        std::size_t task_count;
        if (method == Method::simulate)
            task_count = n_sigma;
        else if (method == Method::histogram)
            task_count = config.histogram.nu_values.size();
        else
            task_count = n_sigma * n_nu;

        if (method == Method::histogram) {
            for (std::size_t t = 0; t < task_count; ++t) {
                const TaskOutput& out = outputs[cursor + t];
                const std::string path = (out_dir / out.histogram_file).string();
                write_histogram_csv(path, out.histograms);
                result.output_files.push_back(path);
                for (const PointRecord& record : out.points)
                    result.manifest.points.push_back(record);
            }
        } else {
            std::vector<CurveRow> method_rows;
            for (std::size_t t = 0; t < task_count; ++t) {
                const TaskOutput& out = outputs[cursor + t];
                method_rows.insert(method_rows.end(), out.rows.begin(),
                                   out.rows.end());
                for (const PointRecord& record : out.points)
                    result.manifest.points.push_back(record);
            }
            const std::string path =
                (out_dir / (to_string(method) + ".csv")).string();
            write_curve_csv(path, method_rows);
            result.output_files.push_back(path);
            result.rows.insert(result.rows.end(), method_rows.begin(),
                               method_rows.end());
        }
        cursor += task_count;
    }

    for (const PointRecord& record : result.manifest.points)
        if (!record.converged)
            result.all_converged = false;
    result.manifest.all_converged = result.all_converged;
    result.manifest.output_files = result.output_files;

    const std::string manifest_path = (out_dir / "manifest.json").string();
    write_manifest(manifest_path, result.manifest);
    result.output_files.push_back(manifest_path);

    return result;
}

} // namespace graphgp
