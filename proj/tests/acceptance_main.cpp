// Acceptance suite: end-to-end checks of the solvers and the simulator
// against independent oracles and against each other at production scale.
// Each numbered check prints one [PASS]/[FAIL] line with its runtime; the
// exit status is the number of failed checks. `--only N` runs a single check
// (anything it depends on is computed on demand and cached).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "graphgp/cavity_global.hpp"
#include "graphgp/cavity_local.hpp"
#include "graphgp/degree_distribution.hpp"
#include "graphgp/exact_gp.hpp"
#include "graphgp/graph.hpp"
#include "graphgp/histogram.hpp"
#include "graphgp/kernel.hpp"
#include "graphgp/poisson_average.hpp"
#include "graphgp/rng.hpp"

namespace {

using namespace graphgp;
using steady = std::chrono::steady_clock;

double seconds_since(steady::time_point t0) {
    return std::chrono::duration<double>(steady::now() - t0).count();
}

// ---------------------------------------------------------------------------
// Shared fixtures.

const KernelParams kParams{2.0, 10}; // production kernel for every check
constexpr double kSigmaHigh = 0.1;
constexpr double kSigmaLow = 0.01;
constexpr int kGraphSize = 500;
constexpr int kGraphsPerPoint = 10;
constexpr int kSetsPerGraph = 10;

// The nu grid for solver/simulator comparisons: the default log-spaced grid
// with nu = 1 inserted so the isolated-vertex floor check lands on a grid
// point.
std::vector<double> comparison_grid() {
    std::vector<double> grid;
    for (int k = 0; k < 20; ++k)
        grid.push_back(std::pow(10.0, -2.0 + 3.0 * static_cast<double>(k) / 19.0));
    grid.push_back(1.0);
    std::sort(grid.begin(), grid.end());
    return grid;
}

SolverSettings curve_settings() {
    SolverSettings settings; // library defaults: population 5000, 400 sweeps
    return settings;
}

// Exact learning curve for the disjoint-edge ensemble: the normalized kernel
// of an isolated edge is the all-ones matrix, so the function is a single
// standard Gaussian scalar and the posterior variance with G observations in
// total is 1/(1 + G/sigma2); G is Poisson with mean 2 nu.
double exact_dimer_epsilon(double nu, double sigma2) {
    return poisson_expectation(2.0 * nu, [sigma2](int g) {
        return 1.0 / (1.0 + static_cast<double>(g) / sigma2);
    });
}

// ---------------------------------------------------------------------------
// Curve registry feeding the monotonicity suite (check 10).

struct RegisteredCurve {
    std::string label;  // printable identity
    std::string family; // same family + different sigma2 => ordering check
    double sigma2 = 0.0;
    std::vector<LearningCurvePoint> points; // ascending nu
};

std::vector<RegisteredCurve>& curve_registry() {
    static std::vector<RegisteredCurve> curves;
    return curves;
}

void register_curve(const std::string& family, double sigma2,
                    std::vector<LearningCurvePoint> points) {
    char label[160];
    std::snprintf(label, sizeof label, "%s sigma2=%g", family.c_str(), sigma2);
    curve_registry().push_back(
        RegisteredCurve{label, family, sigma2, std::move(points)});
}

// ---------------------------------------------------------------------------
// Lazily computed solver/simulator curve pairs (checks 4, 5, 6, 7, 10).

struct DimerBundle {
    std::vector<double> grid;
    std::vector<double> exact;
    std::vector<LearningCurvePoint> global_curve;
    std::vector<LearningCurvePoint> local_curve;
};

const DimerBundle& dimer_bundle() {
    static DimerBundle bundle;
    static bool ready = false;
    if (ready)
        return bundle;

    const DegreeDistribution dist = DegreeDistribution::regular(1);
    bundle.grid = comparison_grid();
    for (double nu : bundle.grid)
        bundle.exact.push_back(exact_dimer_epsilon(nu, kSigmaHigh));

    // The per-point gate has a 0.5% relative floor; push the statistical
    // error (which the scatter-based std_err reports honestly, measured
    // against cross-seed scatter) down to ~0.15% relative so the floor is a
    // ~3.5 sigma bound at every one of the 42 gated points.
    SolverSettings settings = curve_settings();
    settings.epsilon_samples = 800000;
    settings.averaging_sweeps = 40;
    const double kappa = calibrate_kappa(dist, kParams, kSigmaHigh, settings, 401);
    std::printf("   disjoint-edge calibration: kappa = %.9f\n", kappa);

    for (std::size_t i = 0; i < bundle.grid.size(); ++i) {
        GlobalSolverConfig config;
        config.dist = dist;
        config.params = kParams;
        config.sigma2 = kSigmaHigh;
        config.nu = bundle.grid[i];
        config.kappa = kappa;
        config.settings = settings;
        config.seed = derive_seed(402, i);
        bundle.global_curve.push_back(LearningCurvePoint{
            config.nu, 0.0, 0.0, 0});
        const GlobalSolution solution = solve_global(config);
        bundle.global_curve.back().epsilon = solution.estimate.epsilon;
        bundle.global_curve.back().std_err = solution.estimate.std_err;
        bundle.global_curve.back().n_samples = solution.estimate.n_samples;

        LocalSolverConfig local;
        local.dist = dist;
        local.params = kParams;
        local.sigma2 = kSigmaHigh;
        local.nu = bundle.grid[i];
        local.settings = settings;
        local.seed = derive_seed(403, i);
        const LocalSolution local_solution = solve_local(local);
        bundle.local_curve.push_back(LearningCurvePoint{
            local.nu, local_solution.estimate.epsilon,
            local_solution.estimate.std_err, local_solution.estimate.n_samples});
    }

    std::vector<LearningCurvePoint> exact_points;
    for (std::size_t i = 0; i < bundle.grid.size(); ++i)
        exact_points.push_back(
            LearningCurvePoint{bundle.grid[i], bundle.exact[i], 0.0, 0});
    register_curve("exact regular(1) curve", kSigmaHigh, exact_points);
    register_curve("cavity_global regular(1)", kSigmaHigh, bundle.global_curve);
    register_curve("cavity_local regular(1)", kSigmaHigh, bundle.local_curve);
    ready = true;
    return bundle;
}

enum class Ensemble { poisson3, pareto };

DegreeDistribution make_ensemble(Ensemble which) {
    return which == Ensemble::poisson3
               ? DegreeDistribution::poisson(3.0)
               : DegreeDistribution::pareto_mixed_poisson(2.5, 2.0);
}

const char* ensemble_name(Ensemble which) {
    return which == Ensemble::poisson3 ? "poisson(3)" : "pareto_mixed_poisson(2.5,2)";
}

struct PairedCurves {
    std::vector<LearningCurvePoint> sim;
    std::vector<LearningCurvePoint> cavity;
};

// Simulation and cavity prediction over the comparison grid for one
// (ensemble, normalization, sigma2) cell, computed once and cached. The
// global-normalization kappa is calibrated once per ensemble (it does not
// depend on sigma2).
const PairedCurves& agreement_curves(Ensemble which, Normalization mode,
                                     double sigma2) {
    static std::map<std::tuple<int, int, double>, PairedCurves> cache;
    const auto key = std::make_tuple(static_cast<int>(which),
                                     static_cast<int>(mode), sigma2);
    auto found = cache.find(key);
    if (found != cache.end())
        return found->second;

    const auto t0 = steady::now();
    const DegreeDistribution dist = make_ensemble(which);
    const std::vector<double> grid = comparison_grid();
    const std::uint64_t cell_seed =
        derive_seed(500, static_cast<std::uint64_t>(which) * 2 +
                             static_cast<std::uint64_t>(mode),
                    static_cast<std::uint64_t>(sigma2 * 1e6));

    PairedCurves pair;
    rng_t sim_rng(derive_seed(cell_seed, 1));
    pair.sim = simulate_learning_curve(dist, kGraphSize, kParams, mode, sigma2,
                                       grid, kGraphsPerPoint, kSetsPerGraph,
                                       sim_rng);

    const SolverSettings settings = curve_settings();
    if (mode == Normalization::global) {
        static std::map<int, double> kappa_cache;
        auto kappa_it = kappa_cache.find(static_cast<int>(which));
        if (kappa_it == kappa_cache.end()) {
            const double kappa = calibrate_kappa(
                dist, kParams, sigma2, settings, derive_seed(cell_seed, 2));
            kappa_it = kappa_cache.emplace(static_cast<int>(which), kappa).first;
            std::printf("   %s calibration: kappa = %.9f\n",
                        ensemble_name(which), kappa);
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            GlobalSolverConfig config;
            config.dist = dist;
            config.params = kParams;
            config.sigma2 = sigma2;
            config.nu = grid[i];
            config.kappa = kappa_it->second;
            config.settings = settings;
            config.seed = derive_seed(cell_seed, 3, i);
            const GlobalSolution solution = solve_global(config);
            pair.cavity.push_back(LearningCurvePoint{
                grid[i], solution.estimate.epsilon, solution.estimate.std_err,
                solution.estimate.n_samples});
        }
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            LocalSolverConfig config;
            config.dist = dist;
            config.params = kParams;
            config.sigma2 = sigma2;
            config.nu = grid[i];
            config.settings = settings;
            config.seed = derive_seed(cell_seed, 4, i);
            const LocalSolution solution = solve_local(config);
            pair.cavity.push_back(LearningCurvePoint{
                grid[i], solution.estimate.epsilon, solution.estimate.std_err,
                solution.estimate.n_samples});
        }
    }

    const char* mode_name = mode == Normalization::global ? "global" : "local";
    char family[120];
    std::snprintf(family, sizeof family, "simulate %s %s", ensemble_name(which),
                  mode_name);
    register_curve(family, sigma2, pair.sim);
    std::snprintf(family, sizeof family, "cavity_%s %s", mode_name,
                  ensemble_name(which));
    register_curve(family, sigma2, pair.cavity);

    std::printf("   curves for %s %s sigma2=%g ready (%.1f s)\n",
                ensemble_name(which), mode_name, sigma2, seconds_since(t0));
    std::fflush(stdout);
    auto inserted = cache.emplace(key, std::move(pair));
    return inserted.first->second;
}

// Worst relative deviation of the cavity curve from the simulated curve.
struct Deviation {
    double max_rel = 0.0;
    double at_nu = 0.0;
};

Deviation max_relative_deviation(const PairedCurves& pair) {
    Deviation dev;
    for (std::size_t i = 0; i < pair.sim.size(); ++i) {
        const double rel = std::abs(pair.cavity[i].epsilon - pair.sim[i].epsilon) /
                           pair.sim[i].epsilon;
        if (rel > dev.max_rel) {
            dev.max_rel = rel;
            dev.at_nu = pair.sim[i].nu;
        }
    }
    return dev;
}

// ---------------------------------------------------------------------------
// Check 1: epsilon(0) = 1 under both normalizations.

bool check_normalization() {
    bool pass = true;

    // Deterministic-fixed-point ensembles through the full independent-seed
    // pipeline: calibrate kappa with one base seed, solve with another.
    for (int degree : {1, 3}) {
        const DegreeDistribution dist = DegreeDistribution::regular(degree);
        SolverSettings settings;
        settings.population_size = 2000;
        settings.min_sweeps = 60; // enough sweeps for the population to collapse

        const double kappa = calibrate_kappa(dist, kParams, kSigmaHigh, settings,
                                             derive_seed(101, degree));
        GlobalSolverConfig config;
        config.dist = dist;
        config.params = kParams;
        config.sigma2 = kSigmaHigh;
        config.nu = 0.0;
        config.kappa = kappa;
        config.settings = settings;
        config.seed = derive_seed(102, degree);
        const GlobalSolution solution = solve_global(config);
        const double dev = std::abs(solution.estimate.epsilon - 1.0);
        std::printf("   global regular(%d): kappa=%.9f eps(0)=%.9f |dev|=%.2e\n",
                    degree, kappa, solution.estimate.epsilon, dev);
        pass = pass && dev <= 1e-3;

        LocalSolverConfig local;
        local.dist = dist;
        local.params = kParams;
        local.sigma2 = kSigmaHigh;
        local.nu = 0.0;
        local.settings = settings;
        local.seed = derive_seed(103, degree);
        const LocalSolution local_solution = solve_local(local);
        const double local_dev = std::abs(local_solution.estimate.epsilon - 1.0);
        std::printf("   local  regular(%d): eps(0)=%.12f |dev|=%.2e stderr=%.1e\n",
                    degree, local_solution.estimate.epsilon, local_dev,
                    local_solution.estimate.std_err);
        pass = pass && local_dev <= 1e-3;
    }

    // Heterogeneous ensemble: the population realization carries ~1% noise in
    // the mean prior variance at population 5000, so kappa and the epsilon(0)
    // evaluation are measured on the same converged population through two
    // independent sample streams; the realization noise divides out and the
    // residual is pure Monte-Carlo error.
    {
        const DegreeDistribution dist = DegreeDistribution::poisson(3.0);
        GlobalSolverConfig config;
        config.dist = dist;
        config.params = kParams;
        config.sigma2 = kSigmaHigh;
        config.nu = 0.0;
        config.kappa = 1.0;
        config.settings = curve_settings();
        config.seed = 104;
        const GlobalPopulation population = run_population_global(config);

        const long n_samples = 8000000;
        rng_t rng_kappa(derive_seed(105, 1));
        rng_t rng_eval(derive_seed(105, 2));
        const EpsilonEstimate kappa_est = epsilon_global(
            population, dist, 0.0, 1.0, kSigmaHigh, n_samples, rng_kappa);
        const EpsilonEstimate eps_est =
            epsilon_global(population, dist, 0.0, kappa_est.epsilon, kSigmaHigh,
                           n_samples, rng_eval);
        const double dev = std::abs(eps_est.epsilon - 1.0);
        const double mc_err = std::hypot(kappa_est.std_err / kappa_est.epsilon,
                                         eps_est.std_err / eps_est.epsilon);
        std::printf("   global poisson(3): kappa=%.9f eps(0)=%.9f |dev|=%.2e "
                    "(mc err %.1e)\n",
                    kappa_est.epsilon, eps_est.epsilon, dev, mc_err);
        pass = pass && dev <= 1e-3;

        LocalSolverConfig local;
        local.dist = dist;
        local.params = kParams;
        local.sigma2 = kSigmaHigh;
        local.nu = 0.0;
        local.settings = curve_settings();
        local.seed = 106;
        const LocalSolution local_solution = solve_local(local);
        const double local_dev = std::abs(local_solution.estimate.epsilon - 1.0);
        std::printf("   local  poisson(3): eps(0)=%.12f |dev|=%.2e stderr=%.1e\n",
                    local_solution.estimate.epsilon, local_dev,
                    local_solution.estimate.std_err);
        pass = pass && local_dev <= 1e-3;
    }

    return pass;
}

// ---------------------------------------------------------------------------
// Check 2: collapsed posterior variances equal the naive Gram formula.

std::vector<double> naive_gram_variances(const Eigen::MatrixXd& C,
                                         const std::vector<int>& counts,
                                         double sigma2) {
    const int n = static_cast<int>(C.rows());
    std::vector<int> observations;
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < counts[static_cast<std::size_t>(i)]; ++r)
            observations.push_back(i);
    const int m = static_cast<int>(observations.size());

    std::vector<double> variances(static_cast<std::size_t>(n));
    if (m == 0) {
        for (int i = 0; i < n; ++i)
            variances[static_cast<std::size_t>(i)] = C(i, i);
        return variances;
    }

    Eigen::MatrixXd gram(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            gram(a, b) = C(observations[static_cast<std::size_t>(a)],
                           observations[static_cast<std::size_t>(b)]);
    gram.diagonal().array() += sigma2;
    const Eigen::LLT<Eigen::MatrixXd> llt(gram);

    Eigen::VectorXd k(m);
    for (int i = 0; i < n; ++i) {
        for (int a = 0; a < m; ++a)
            k(a) = C(observations[static_cast<std::size_t>(a)], i);
        variances[static_cast<std::size_t>(i)] = C(i, i) - k.dot(llt.solve(k));
    }
    return variances;
}

bool check_exact_gp_equivalence() {
    rng_t rng(201);
    const std::vector<KernelParams> params_pool = {
        {2.0, 10}, {2.0, 3}, {2.5, 4}, {3.0, 5}, {2.0, 1}};
    double worst = 0.0;

    for (int instance = 0; instance < 50; ++instance) {
        std::uniform_int_distribution<int> size_dist(5, 40);
        int n_vertices = size_dist(rng);
        const bool use_regular = instance % 2 != 0;
        if (use_regular && n_vertices % 2 != 0)
            ++n_vertices; // a 3-regular graph needs an even vertex count
        const DegreeDistribution dist = use_regular
                                            ? DegreeDistribution::regular(3)
                                            : DegreeDistribution::poisson(2.5);
        const Graph graph = sample_graph(dist, n_vertices, rng);
        const KernelParams params =
            params_pool[static_cast<std::size_t>(instance) % params_pool.size()];
        const Normalization mode =
            instance % 3 == 0 ? Normalization::global : Normalization::local;
        const double sigma2 = instance % 3 == 0   ? 1.0
                              : instance % 3 == 1 ? 0.1
                                                  : 0.01;

        const KernelMatrix kernel =
            normalize_kernel(raw_kernel(graph, params), mode);

        std::uniform_int_distribution<int> n_obs_dist(0, 80);
        const int n_obs = n_obs_dist(rng);
        std::vector<int> counts(static_cast<std::size_t>(n_vertices), 0);
        std::uniform_int_distribution<int> vertex_dist(0, n_vertices - 1);
        for (int r = 0; r < n_obs; ++r)
            ++counts[static_cast<std::size_t>(vertex_dist(rng))];

        const std::vector<double> collapsed =
            posterior_variances(kernel.C, counts, sigma2);
        const std::vector<double> naive =
            naive_gram_variances(kernel.C, counts, sigma2);
        for (int i = 0; i < n_vertices; ++i)
            worst = std::max(worst,
                             std::abs(collapsed[static_cast<std::size_t>(i)] -
                                      naive[static_cast<std::size_t>(i)]));
    }
    std::printf("   50 instances, max |collapsed - naive| = %.3e\n", worst);
    return worst < 1e-8;
}

// ---------------------------------------------------------------------------
// Check 3: rank-one regularized inverse against dense inversion.

Eigen::MatrixXd random_symmetric_bounded(rng_t& rng, int dim) {
    // Random orthogonal basis (QR of a Gaussian matrix) with eigenvalues of
    // random sign and magnitude in [0.3, 3]: symmetric, indefinite, and
    // safely invertible.
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            g(i, j) = gauss(rng);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ();
    std::uniform_real_distribution<double> mag(0.3, 3.0);
    std::bernoulli_distribution flip(0.5);
    Eigen::VectorXd eigs(dim);
    for (int i = 0; i < dim; ++i)
        eigs(i) = (flip(rng) ? -1.0 : 1.0) * mag(rng);
    return q * eigs.asDiagonal() * q.transpose();
}

bool check_rank_one_inverse() {
    rng_t rng(301);
    bool pass = true;

    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int dim = 2 + trial % 11;
        const Eigen::MatrixXd m = random_symmetric_bounded(rng, dim);
        std::uniform_real_distribution<double> log_s(-6.0, 3.0);
        const double s = std::pow(10.0, log_s(rng));

        const Eigen::MatrixXd fast = rank_one_regularized_inverse(m, s);
        Eigen::MatrixXd shifted = m;
        shifted(0, 0) += 1.0 / s;
        const Eigen::MatrixXd dense = shifted.inverse();
        const double rel = (fast - dense).norm() / dense.norm();
        worst = std::max(worst, rel);
    }
    std::printf("   1000 matrices at finite s: max rel err = %.3e\n", worst);
    pass = pass && worst < 1e-9;

    bool exact_zero = true;
    double worst_block = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        const int dim = 2 + trial % 11;
        const Eigen::MatrixXd m = random_symmetric_bounded(rng, dim);
        const Eigen::MatrixXd annihilated = rank_one_regularized_inverse(m, 0.0);
        for (int i = 0; i < dim; ++i)
            exact_zero = exact_zero && annihilated(0, i) == 0.0 &&
                         annihilated(i, 0) == 0.0;
        const Eigen::MatrixXd block_inverse =
            m.bottomRightCorner(dim - 1, dim - 1).inverse();
        const double rel =
            (annihilated.bottomRightCorner(dim - 1, dim - 1) - block_inverse)
                .norm() /
            block_inverse.norm();
        worst_block = std::max(worst_block, rel);
    }
    std::printf("   300 matrices at s = 0: first row/col exactly zero = %s, "
                "surviving block max rel err = %.3e\n",
                exact_zero ? "yes" : "no", worst_block);
    pass = pass && exact_zero && worst_block < 1e-9;
    return pass;
}

// ---------------------------------------------------------------------------
// Check 9: kernel PSD and exact local diagonals on sampled graphs.

bool check_kernel_sanity() {
    rng_t rng(901);
    const DegreeDistribution dist = DegreeDistribution::poisson(3.0);
    double worst_eig_ratio = 0.0; // most negative min-eigenvalue, relative
    double worst_diag = 0.0;

    for (int trial = 0; trial < 100; ++trial) {
        const Graph graph = sample_graph(dist, 100, rng);
        const KernelMatrix raw = raw_kernel(graph, kParams);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            raw.C, Eigen::EigenvaluesOnly);
        const double max_eig = eig.eigenvalues().maxCoeff();
        const double min_eig = eig.eigenvalues().minCoeff();
        worst_eig_ratio = std::max(worst_eig_ratio, -min_eig / max_eig);

        const KernelMatrix local = normalize_kernel(raw, Normalization::local);
        for (int i = 0; i < 100; ++i)
            worst_diag = std::max(worst_diag, std::abs(local.C(i, i) - 1.0));
    }
    std::printf("   100 graphs: worst -min_eig/max_eig = %.3e, "
                "worst |local diag - 1| = %.3e\n",
                worst_eig_ratio, worst_diag);
    return worst_eig_ratio <= 1e-8 && worst_diag <= 1e-10;
}

// ---------------------------------------------------------------------------
// Check 4: both solvers against the exact disjoint-edge curve.

bool check_dimer_closed_loop() {
    const DimerBundle& bundle = dimer_bundle();
    bool pass = true;
    double worst_global = 0.0;
    double worst_local = 0.0;

    for (std::size_t i = 0; i < bundle.grid.size(); ++i) {
        const double exact = bundle.exact[i];
        for (int which = 0; which < 2; ++which) {
            const LearningCurvePoint& point =
                which == 0 ? bundle.global_curve[i] : bundle.local_curve[i];
            const double dev = std::abs(point.epsilon - exact);
            const double gate = std::max(2.0 * point.std_err, 0.005 * exact);
            if (dev > gate) {
                std::printf("   DEVIATION %s nu=%.5f: pred %.6f exact %.6f "
                            "dev %.2e > gate %.2e\n",
                            which == 0 ? "global" : "local", point.nu,
                            point.epsilon, exact, dev, gate);
                pass = false;
            }
            double& worst = which == 0 ? worst_global : worst_local;
            worst = std::max(worst, dev / exact);
        }
    }
    std::printf("   %zu grid points: worst relative deviation global %.4f%%, "
                "local %.4f%%\n",
                bundle.grid.size(), 100.0 * worst_global, 100.0 * worst_local);
    return pass;
}

// ---------------------------------------------------------------------------
// Check 8: population structure on the 3-regular ensemble.

bool check_population_structure() {
    const DegreeDistribution dist = DegreeDistribution::regular(3);
    bool pass = true;

    // (a) nu = 0: the update has a unique attractive fixed point, so the
    // population must collapse to it.
    {
        GlobalSolverConfig config;
        config.dist = dist;
        config.params = kParams;
        config.sigma2 = kSigmaHigh;
        config.nu = 0.0;
        config.kappa = 1.0; // irrelevant at nu = 0
        config.settings.population_size = 1000;
        config.settings.min_sweeps = 300;
        config.settings.n_sweeps = 400;
        config.seed = 801;
        const GlobalPopulation population = run_population_global(config);
        const double spread = population_entrywise_stddev_max(population);
        std::printf("   nu=0: entrywise stddev %.3e after %d sweeps\n", spread,
                    population.diagnostics.sweeps_run);
        pass = pass && spread < 1e-8;
    }

    SolverSettings settings = curve_settings();
    settings.min_sweeps = 100; // rare-example structure builds up slowly
    const double kappa =
        calibrate_kappa(dist, kParams, kSigmaHigh, settings, 802);

    // (b) nu = 1e-4: almost all vertices are unobserved, so the marginal
    // posterior-variance proxy is a mixture of delta peaks indexed by the
    // graph distance to the nearest example. A member carries an example with
    // probability ~1e-4, so the population must be large enough to hold the
    // rare perturbed members at their stationary frequency.
    {
        GlobalSolverConfig config;
        config.dist = dist;
        config.params = kParams;
        config.sigma2 = kSigmaHigh;
        config.nu = 1e-4;
        config.kappa = kappa;
        config.settings = settings;
        config.settings.population_size = 50000;
        config.settings.min_sweeps = 60;
        config.seed = 803;
        const GlobalPopulation population = run_population_global(config);
        rng_t rng(804);
        const PopulationStats stats = export_population_stats(
            population, dist, config.nu, kappa, config.sigma2, 200000, 160, rng);
        const int modes = count_modes(stats.proxy_variance, 5);
        std::printf("   nu=1e-4: %d isolated modes in the variance proxy "
                    "(160 bins over [%.3g, %.3g], min island count 5)\n",
                    modes, stats.proxy_variance.lo, stats.proxy_variance.hi);
        pass = pass && modes >= 3;
    }

    // (c) nu = 10: nearly every vertex carries examples and the proxy mass
    // concentrates near zero.
    {
        GlobalSolverConfig config;
        config.dist = dist;
        config.params = kParams;
        config.sigma2 = kSigmaHigh;
        config.nu = 10.0;
        config.kappa = kappa;
        config.settings = settings;
        config.seed = 805;
        const GlobalPopulation population = run_population_global(config);
        rng_t rng(806);
        const PopulationStats stats = export_population_stats(
            population, dist, config.nu, kappa, config.sigma2, 200000, 160, rng);
        const double mass = mass_in_range(stats.proxy_variance, 0.0, 0.1);
        std::printf("   nu=10: proxy mass in [0, 0.1] = %.5f\n", mass);
        pass = pass && mass >= 0.9;
    }

    return pass;
}

// ---------------------------------------------------------------------------
// Checks 5/6: solver vs finite-graph simulation at production scale.

bool check_agreement(Normalization mode) {
    bool pass = true;
    const std::vector<Ensemble> ensembles =
        mode == Normalization::global
            ? std::vector<Ensemble>{Ensemble::poisson3}
            : std::vector<Ensemble>{Ensemble::poisson3, Ensemble::pareto};

    for (Ensemble which : ensembles) {
        for (double sigma2 : {kSigmaHigh, kSigmaLow}) {
            const PairedCurves& pair = agreement_curves(which, mode, sigma2);
            const Deviation dev = max_relative_deviation(pair);
            const double gate = sigma2 == kSigmaHigh ? 0.05 : 0.10;
            std::printf("   %s sigma2=%g: max rel deviation %.4f%% at nu=%.4g "
                        "(gate %.0f%%)\n",
                        ensemble_name(which), sigma2, 100.0 * dev.max_rel,
                        dev.at_nu, 100.0 * gate);
            pass = pass && dev.max_rel < gate;
        }
    }
    return pass;
}

// ---------------------------------------------------------------------------
// Check 7: isolated-vertex error floor at nu = 1, local normalization.

bool check_isolated_floor() {
    bool pass = true;
    const double analytic_isolated = poisson_expectation(1.0, [](int g) {
        return 1.0 / (1.0 + static_cast<double>(g) / kSigmaLow);
    });
    const double floor = std::exp(-3.0) * analytic_isolated;
    std::printf("   analytic isolated-vertex error %.6f, curve floor %.6f\n",
                analytic_isolated, floor);

    const PairedCurves& pair =
        agreement_curves(Ensemble::poisson3, Normalization::local, kSigmaLow);
    double sim_at_one = -1.0;
    double cavity_at_one = -1.0;
    for (std::size_t i = 0; i < pair.sim.size(); ++i) {
        if (pair.sim[i].nu == 1.0) {
            sim_at_one = pair.sim[i].epsilon;
            cavity_at_one = pair.cavity[i].epsilon;
        }
    }
    std::printf("   eps(1): cavity %.6f, simulated %.6f (both must be >= "
                "%.6f)\n",
                cavity_at_one, sim_at_one, floor);
    pass = pass && sim_at_one >= floor && cavity_at_one >= floor;

    // Restriction of the simulated error to degree-0 vertices.
    rng_t rng(701);
    const DegreeDistribution dist = DegreeDistribution::poisson(3.0);
    double sum = 0.0;
    long count = 0;
    for (int g = 0; g < kGraphsPerPoint; ++g) {
        const Graph graph = sample_graph(dist, kGraphSize, rng);
        const KernelMatrix kernel =
            normalize_kernel(raw_kernel(graph, kParams), Normalization::local);
        for (int set = 0; set < kSetsPerGraph; ++set) {
            std::vector<int> counts(static_cast<std::size_t>(kGraphSize), 0);
            std::uniform_int_distribution<int> vertex_dist(0, kGraphSize - 1);
            for (int r = 0; r < kGraphSize; ++r) // N = round(1.0 * V)
                ++counts[static_cast<std::size_t>(vertex_dist(rng))];
            const std::vector<double> variances =
                posterior_variances(kernel.C, counts, kSigmaLow);
            for (int i = 0; i < kGraphSize; ++i) {
                if (graph.degrees[static_cast<std::size_t>(i)] == 0) {
                    sum += variances[static_cast<std::size_t>(i)];
                    ++count;
                }
            }
        }
    }
    const double isolated_mean = sum / static_cast<double>(count);
    const double rel = std::abs(isolated_mean / analytic_isolated - 1.0);
    std::printf("   simulated isolated-vertex restriction: %.6f over %ld "
                "vertex draws, rel dev %.4f%% (gate 10%%)\n",
                isolated_mean, count, 100.0 * rel);
    pass = pass && rel <= 0.10;
    return pass;
}

// ---------------------------------------------------------------------------
// Check 10: monotonicity of every produced curve.

bool check_monotonicity() {
    // Make sure the full standard curve set exists even under --only 10.
    (void)dimer_bundle();
    for (double sigma2 : {kSigmaHigh, kSigmaLow}) {
        (void)agreement_curves(Ensemble::poisson3, Normalization::global, sigma2);
        (void)agreement_curves(Ensemble::poisson3, Normalization::local, sigma2);
        (void)agreement_curves(Ensemble::pareto, Normalization::local, sigma2);
    }

    bool pass = true;
    long nu_pairs = 0;
    for (const RegisteredCurve& curve : curve_registry()) {
        for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
            const LearningCurvePoint& lo = curve.points[i];
            const LearningCurvePoint& hi = curve.points[i + 1];
            const double slack =
                2.0 * std::hypot(lo.std_err, hi.std_err);
            ++nu_pairs;
            if (hi.epsilon > lo.epsilon + slack) {
                std::printf("   NOT NON-INCREASING [%s] nu %.4g -> %.4g: "
                            "%.6f -> %.6f (slack %.2e)\n",
                            curve.label.c_str(), lo.nu, hi.nu, lo.epsilon,
                            hi.epsilon, slack);
                pass = false;
            }
        }
    }

    long sigma_pairs = 0;
    for (const RegisteredCurve& low : curve_registry()) {
        for (const RegisteredCurve& high : curve_registry()) {
            if (low.family != high.family || !(low.sigma2 < high.sigma2))
                continue;
            for (std::size_t i = 0; i < low.points.size(); ++i) {
                const LearningCurvePoint& a = low.points[i];
                const LearningCurvePoint& b = high.points[i];
                const double slack = 2.0 * std::hypot(a.std_err, b.std_err);
                ++sigma_pairs;
                if (b.epsilon < a.epsilon - slack) {
                    std::printf("   NOT NON-DECREASING IN sigma2 [%s] nu %.4g: "
                                "eps(%.3g)=%.6f > eps(%.3g)=%.6f (slack %.2e)\n",
                                low.family.c_str(), a.nu, low.sigma2, a.epsilon,
                                high.sigma2, b.epsilon, slack);
                    pass = false;
                }
            }
        }
    }
    std::printf("   %zu curves: %ld adjacent-nu pairs and %ld sigma2 pairs "
                "checked\n",
                curve_registry().size(), nu_pairs, sigma_pairs);
    return pass;
}

struct CheckEntry {
    int id;
    const char* title;
    bool (*fn)();
};

const CheckEntry kChecks[] = {
    {1, "epsilon(0) = 1 under both normalizations", check_normalization},
    {2, "collapsed posterior variances match the naive Gram formula",
     check_exact_gp_equivalence},
    {3, "rank-one regularized inverse matches dense inversion",
     check_rank_one_inverse},
    {9, "kernels are PSD with exact local diagonals on sampled graphs",
     check_kernel_sanity},
    {4, "both solvers reproduce the exact disjoint-edge curve",
     check_dimer_closed_loop},
    {8, "population collapse, delta peaks, and concentration",
     check_population_structure},
    {5, "globally normalized solver matches finite-graph simulation",
     [] { return check_agreement(Normalization::global); }},
    {6, "locally normalized solver matches finite-graph simulation",
     [] { return check_agreement(Normalization::local); }},
    {7, "isolated-vertex error floor at nu = 1", check_isolated_floor},
    {10, "curves are monotone in nu and sigma2 within statistical error",
     check_monotonicity},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[i + 1]);
            ++i;
        } else {
            std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
            return 64;
        }
    }

    int failures = 0;
    const auto suite_start = steady::now();
    for (const CheckEntry& check : kChecks) {
        if (only != 0 && check.id != only)
            continue;
        std::printf("== criterion %d: %s ==\n", check.id, check.title);
        std::fflush(stdout);
        const auto t0 = steady::now();
        bool pass = false;
        try {
            pass = check.fn();
        } catch (const std::exception& error) {
            std::printf("   exception: %s\n", error.what());
        }
        std::printf("[%s] criterion %d: %s (%.1f s)\n", pass ? "PASS" : "FAIL",
                    check.id, check.title, seconds_since(t0));
        std::fflush(stdout);
        if (!pass)
            ++failures;
    }
    std::printf("acceptance finished: %d failure(s), %.1f s total\n", failures,
                seconds_since(suite_start));
    return failures;
}
