#include "graphgp/cavity_global.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphgp/errors.hpp"
#include "graphgp/poisson_average.hpp"
#include "window_rule.hpp"

namespace graphgp {

namespace {

// Seed-derivation salts: every random stream consumed by the solver hangs off
// the user seed through one of these, so re-running any piece in isolation
// reproduces it exactly.
constexpr std::uint64_t kSaltPopulation = 0x11;
constexpr std::uint64_t kSaltConvergence = 0x12;
constexpr std::uint64_t kSaltCalibrationRun = 0x13;
constexpr std::uint64_t kSaltFinalEval = 0x16;

// Sweeps inserted between final-estimate evaluations so their population
// states are nearly independent.
constexpr int kDecorrelationSweeps = 2;

double regularizer_global(int gamma, int d, double kappa, double sigma2) {
    if (gamma == 0)
        return 0.0;
    return (static_cast<double>(gamma) / sigma2) /
           (static_cast<double>(d) * kappa);
}

void check_scalars(double sigma2, double kappa, double nu) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw config_error("sigma2 must be positive and finite");
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw config_error("kappa must be positive and finite");
    if (!(nu >= 0.0) || !std::isfinite(nu))
        throw config_error("nu must be nonnegative and finite");
}

struct SweepScratch {
    std::uniform_int_distribution<int> pick_member;
    std::vector<const Eigen::MatrixXd*> incoming;
    Eigen::MatrixXd work;
    Eigen::MatrixXd out;
};

// One full sweep: population_size single-member update attempts.
void sweep_global(GlobalPopulation& population, const GlobalSolverConfig& config,
                  rng_t& rng, SweepScratch& scratch) {
    const int n = static_cast<int>(population.members.size());
    for (int step = 0; step < n; ++step) {
        // Draw order is part of the reproducibility contract:
        // degree, example count, donors, then the overwritten slot.
        const int d = config.dist.size_biased_sample(rng);
        const int gamma = draw_example_count(rng, config.nu);
        scratch.incoming.clear();
        for (int k = 0; k < d - 1; ++k)
            scratch.incoming.push_back(
                &population.members[static_cast<std::size_t>(
                    scratch.pick_member(rng))]);
        const int target = scratch.pick_member(rng);

        scratch.work = static_cast<double>(d) * population.model.o1;
        for (const Eigen::MatrixXd* v : scratch.incoming)
            subtract_xvx(scratch.work, *v);
        const double s = regularizer_global(gamma, d, config.kappa, config.sigma2);
        if (!rank_one_regularized_inverse(scratch.work, s, scratch.out)) {
            ++population.diagnostics.failed_updates;
            continue;
        }
        if (gamma == 0 && scratch.out.col(0).cwiseAbs().maxCoeff() != 0.0)
            ++population.diagnostics.annihilation_violations;
        population.members[static_cast<std::size_t>(target)] = scratch.out;
    }
    ++population.diagnostics.sweeps_run;
}

void init_population_global(GlobalPopulation& population,
                            const GlobalSolverConfig& config, rng_t& rng) {
    population.model = make_cavity_model(config.params.p, config.params.a);
    const int n = config.settings.population_size;
    const int dim = message_dimension(config.params.p);

    // Leaf initialization: every member is a degree-1 message with its own
    // example count and no incoming messages.
    population.members.assign(static_cast<std::size_t>(n), Eigen::MatrixXd());
    Eigen::MatrixXd out(dim, dim);
    for (int i = 0; i < n; ++i) {
        const int gamma = draw_example_count(rng, config.nu);
        const double s = regularizer_global(gamma, 1, config.kappa, config.sigma2);
        if (!rank_one_regularized_inverse(population.model.o1, s, out))
            throw std::runtime_error(
                "run_population_global: leaf message initialization failed");
        population.members[static_cast<std::size_t>(i)] = out;
    }
}

// Shared driver: initialize, then sweep until the stop rule fires or
// n_sweeps is exhausted. The caller may keep using rng to continue sweeping
// the returned population.
GlobalPopulation converge_population_global(const GlobalSolverConfig& config,
                                            rng_t& rng) {
    validate_kernel_params(config.params);
    validate_solver_settings(config.settings);
    check_scalars(config.sigma2, config.kappa, config.nu);

    GlobalPopulation population;
    init_population_global(population, config, rng);

    // All mass on isolated vertices: no edges exist, so leaf messages are
    // never consumed and the population is already at its fixed point.
    if (config.dist.mean_degree() == 0.0) {
        population.diagnostics.converged = true;
        return population;
    }

    const std::uint64_t convergence_seed = derive_seed(config.seed, kSaltConvergence);
    const int dim = message_dimension(config.params.p);
    SweepScratch scratch{
        std::uniform_int_distribution<int>(0, config.settings.population_size - 1),
        {},
        Eigen::MatrixXd(dim, dim),
        Eigen::MatrixXd(dim, dim)};

    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(config.settings.n_sweeps));
    const int min_sweeps =
        std::max(config.settings.min_sweeps, 2 * config.settings.convergence_window);
    for (int sweep = 1; sweep <= config.settings.n_sweeps; ++sweep) {
        sweep_global(population, config, rng, scratch);

        rng_t convergence_rng(convergence_seed);
        const EpsilonEstimate estimate = epsilon_global(
            population, config.dist, config.nu, config.kappa, config.sigma2,
            config.settings.convergence_samples, convergence_rng,
            config.settings.gamma_tail_margin, nullptr);
        history.push_back(estimate.epsilon);
        if (sweep >= min_sweeps &&
            detail::windows_agree(history, config.settings.convergence_window,
                                  config.settings.convergence_tol)) {
            population.diagnostics.converged = true;
            break;
        }
    }
    return population;
}

} // namespace

void validate_solver_settings(const SolverSettings& settings) {
    if (settings.population_size < 1000)
        throw config_error("population_size must be at least 1000");
    if (settings.n_sweeps < 1)
        throw config_error("n_sweeps must be at least 1");
    if (settings.min_sweeps < 0)
        throw config_error("min_sweeps must be nonnegative");
    if (settings.epsilon_samples < 1)
        throw config_error("epsilon_samples must be at least 1");
    if (settings.calibration_samples < 1)
        throw config_error("calibration_samples must be at least 1");
    if (settings.convergence_samples < 1)
        throw config_error("convergence_samples must be at least 1");
    if (!(settings.convergence_tol > 0.0) || !std::isfinite(settings.convergence_tol))
        throw config_error("convergence_tol must be positive and finite");
    if (settings.convergence_window < 2)
        throw config_error("convergence_window must be at least 2");
    if (settings.averaging_sweeps < 1)
        throw config_error("averaging_sweeps must be at least 1");
    if (!(settings.gamma_tail_margin >= 0.0) || !std::isfinite(settings.gamma_tail_margin))
        throw config_error("gamma_tail_margin must be nonnegative and finite");
}

Eigen::MatrixXd update_message_global(
    const CavityModel& model, const std::vector<const Eigen::MatrixXd*>& incoming,
    int d, int gamma, double kappa, double sigma2) {
    if (d < 1)
        throw std::invalid_argument("update_message_global: d must be >= 1");
    if (static_cast<int>(incoming.size()) != d - 1)
        throw std::invalid_argument(
            "update_message_global: expected d-1 incoming messages, got " +
            std::to_string(incoming.size()));
    if (gamma < 0)
        throw std::invalid_argument("update_message_global: gamma must be >= 0");
    if (!(kappa > 0.0) || !(sigma2 > 0.0))
        throw std::invalid_argument(
            "update_message_global: kappa and sigma2 must be positive");

    Eigen::MatrixXd work = static_cast<double>(d) * model.o1;
    for (const Eigen::MatrixXd* v : incoming)
        subtract_xvx(work, *v);
    return rank_one_regularized_inverse(work,
                                        regularizer_global(gamma, d, kappa, sigma2));
}

GlobalPopulation run_population_global(const GlobalSolverConfig& config) {
    rng_t rng(derive_seed(config.seed, kSaltPopulation));
    return converge_population_global(config, rng);
}

EpsilonEstimate epsilon_global(const GlobalPopulation& population,
                               const DegreeDistribution& dist, double nu,
                               double kappa, double sigma2, long n_samples,
                               rng_t& rng, double gamma_tail_margin,
                               PopulationDiagnostics* diagnostics) {
    if (population.members.empty())
        throw std::invalid_argument("epsilon_global: population is empty");
    if (n_samples < 1)
        throw std::invalid_argument("epsilon_global: n_samples must be >= 1");
    check_scalars(sigma2, kappa, nu);

    const CavityModel& model = population.model;
    const int dim = static_cast<int>(model.o1.rows());
    // Isolated vertices keep their unnormalized prior variance (1-1/a)^p;
    // division by zero at a = 1 yields +inf and hence a zero contribution,
    // which is the correct limit.
    const double isolated_precision =
        kappa / std::pow(1.0 - 1.0 / model.a, model.p);

    std::uniform_int_distribution<int> pick_member(
        0, static_cast<int>(population.members.size()) - 1);
    Eigen::MatrixXd work(dim, dim);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(dim);

    double sum = 0.0;
    double sum_sq = 0.0;
    long accepted = 0;
    long discarded = 0;
    const long max_attempts = 2 * n_samples + 1000;
    for (long attempt = 0; attempt < max_attempts && accepted < n_samples; ++attempt) {
        const int d = dist.sample(rng);
        double precision = isolated_precision;
        if (d > 0) {
            work = static_cast<double>(d) * model.o1;
            for (int k = 0; k < d; ++k)
                subtract_xvx(
                    work,
                    population.members[static_cast<std::size_t>(pick_member(rng))]);
            double m00 = 0.0;
            if (!leading_inverse_entry(lu, work, m00)) {
                ++discarded;
                continue;
            }
            if (!(m00 > 0.0)) {
                ++discarded;
                if (diagnostics)
                    ++diagnostics->nonpositive_m00;
                continue;
            }
            precision = static_cast<double>(d) * kappa * m00;
        }
        const double value = poisson_expectation(
            nu,
            [&](int g) {
                return 1.0 / (static_cast<double>(g) / sigma2 + precision);
            },
            gamma_tail_margin);
        sum += value;
        sum_sq += value * value;
        ++accepted;
    }
    if (accepted == 0)
        throw std::runtime_error("epsilon_global: every sample was discarded");

    EpsilonEstimate estimate;
    estimate.epsilon = sum / static_cast<double>(accepted);
    estimate.n_samples = accepted;
    estimate.discarded = discarded;
    if (accepted > 1) {
        const double centered =
            sum_sq - sum * sum / static_cast<double>(accepted);
        const double variance =
            std::max(0.0, centered) / static_cast<double>(accepted - 1);
        estimate.std_err = std::sqrt(variance / static_cast<double>(accepted));
    }
    return estimate;
}

GlobalSolution solve_global(const GlobalSolverConfig& config) {
    rng_t rng(derive_seed(config.seed, kSaltPopulation));
    GlobalSolution solution;
    solution.population = converge_population_global(config, rng);
    GlobalPopulation& population = solution.population;

    const int n_evals = config.settings.averaging_sweeps;
    const long samples_per_eval =
        std::max<long>(1, config.settings.epsilon_samples / n_evals);
    const bool can_sweep = config.dist.mean_degree() > 0.0;
    const int dim = message_dimension(config.params.p);
    SweepScratch scratch{
        std::uniform_int_distribution<int>(0, config.settings.population_size - 1),
        {},
        Eigen::MatrixXd(dim, dim),
        Eigen::MatrixXd(dim, dim)};

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n_evals));
    long total_samples = 0;
    long total_discarded = 0;
    double fallback_std_err = 0.0;
    for (int s = 0; s < n_evals; ++s) {
        if (s > 0 && can_sweep)
            for (int k = 0; k < kDecorrelationSweeps; ++k)
                sweep_global(population, config, rng, scratch);
        rng_t eval_rng(derive_seed(config.seed, kSaltFinalEval,
                                   static_cast<std::uint64_t>(s)));
        const EpsilonEstimate estimate = epsilon_global(
            population, config.dist, config.nu, config.kappa, config.sigma2,
            samples_per_eval, eval_rng, config.settings.gamma_tail_margin,
            &population.diagnostics);
        values.push_back(estimate.epsilon);
        total_samples += estimate.n_samples;
        total_discarded += estimate.discarded;
        fallback_std_err = estimate.std_err;
    }

    EpsilonEstimate& final_estimate = solution.estimate;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    final_estimate.epsilon = sum / static_cast<double>(values.size());
    final_estimate.n_samples = total_samples;
    final_estimate.discarded = total_discarded;
    if (values.size() > 1) {
        double scatter = 0.0;
        for (double v : values) {
            const double centered = v - final_estimate.epsilon;
            scatter += centered * centered;
        }
        final_estimate.std_err = std::sqrt(
            scatter / (static_cast<double>(values.size()) *
                       static_cast<double>(values.size() - 1)));
    } else {
        final_estimate.std_err = fallback_std_err;
    }
    return solution;
}

double calibrate_kappa(const DegreeDistribution& dist, const KernelParams& params,
                       double sigma2, const SolverSettings& settings,
                       std::uint64_t seed, PopulationDiagnostics* diagnostics) {
    GlobalSolverConfig config;
    config.dist = dist;
    config.params = params;
    config.sigma2 = sigma2;
    config.nu = 0.0;
    config.kappa = 1.0;
    config.settings = settings;
    // The calibration averages over its own evaluation sweeps like any other
    // point, but with calibration_samples tuples.
    config.settings.epsilon_samples = settings.calibration_samples;
    config.seed = derive_seed(seed, kSaltCalibrationRun);

    const GlobalSolution solution = solve_global(config);
    if (diagnostics)
        *diagnostics = solution.population.diagnostics;
    // At nu = 0 the error equals the ensemble-average unnormalized prior
    // variance, independent of sigma2: exactly the required normalizer.
    return solution.estimate.epsilon;
}

PopulationStats export_population_stats(const GlobalPopulation& population,
                                        const DegreeDistribution& dist, double nu,
                                        double kappa, double sigma2,
                                        long n_proxy_samples, int n_bins,
                                        rng_t& rng) {
    if (population.members.empty())
        throw std::invalid_argument("export_population_stats: population is empty");
    if (n_proxy_samples < 1 || n_bins < 1)
        throw std::invalid_argument(
            "export_population_stats: sample and bin counts must be >= 1");
    check_scalars(sigma2, kappa, nu);

    PopulationStats stats;

    std::vector<double> raw;
    raw.reserve(population.members.size());
    for (const Eigen::MatrixXd& v : population.members)
        raw.push_back(v(0, 0));
    double lo = raw.front();
    double hi = raw.front();
    for (double x : raw) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const double pad = std::max(1e-12, (hi - lo) * 1e-6);
    stats.raw_v00 = make_histogram(raw, lo, hi + pad, n_bins);

    const CavityModel& model = population.model;
    const int dim = static_cast<int>(model.o1.rows());
    const double isolated_precision =
        kappa / std::pow(1.0 - 1.0 / model.a, model.p);
    std::uniform_int_distribution<int> pick_member(
        0, static_cast<int>(population.members.size()) - 1);
    Eigen::MatrixXd work(dim, dim);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(dim);

    std::vector<double> proxy;
    proxy.reserve(static_cast<std::size_t>(n_proxy_samples));
    for (long i = 0; i < n_proxy_samples; ++i) {
        const int d = dist.sample(rng);
        const int gamma = draw_example_count(rng, nu);
        double precision = isolated_precision;
        if (d > 0) {
            work = static_cast<double>(d) * model.o1;
            for (int k = 0; k < d; ++k)
                subtract_xvx(
                    work,
                    population.members[static_cast<std::size_t>(pick_member(rng))]);
            double m00 = 0.0;
            if (!leading_inverse_entry(lu, work, m00) || !(m00 > 0.0))
                continue;
            precision = static_cast<double>(d) * kappa * m00;
        }
        proxy.push_back(1.0 /
                        (static_cast<double>(gamma) / sigma2 + precision));
    }
    if (proxy.empty())
        throw std::runtime_error(
            "export_population_stats: every proxy sample was discarded");
    double proxy_max = 0.0;
    for (double x : proxy)
        proxy_max = std::max(proxy_max, x);
    if (proxy_max <= 0.0)
        proxy_max = 1e-12;
    stats.proxy_variance = make_histogram(proxy, 0.0, proxy_max * 1.000001, n_bins);
    return stats;
}

double population_entrywise_stddev_max(const GlobalPopulation& population) {
    if (population.members.empty())
        throw std::invalid_argument(
            "population_entrywise_stddev_max: population is empty");
    const Eigen::MatrixXd& first = population.members.front();
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(first.rows(), first.cols());
    for (const Eigen::MatrixXd& v : population.members)
        mean += v;
    mean /= static_cast<double>(population.members.size());
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(first.rows(), first.cols());
    for (const Eigen::MatrixXd& v : population.members) {
        Eigen::MatrixXd centered = v - mean;
        second += centered.cwiseProduct(centered);
    }
    second /= static_cast<double>(population.members.size());
    return std::sqrt(second.maxCoeff());
}

} // namespace graphgp
