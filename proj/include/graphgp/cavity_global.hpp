// Population-dynamics solver for the globally normalized kernel: message
// updates, the kappa calibration that pins the average prior variance to one,
// the learning-curve estimator, and population statistics exports.
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "graphgp/cavity_core.hpp"
#include "graphgp/degree_distribution.hpp"
#include "graphgp/histogram.hpp"
#include "graphgp/kernel.hpp"
#include "graphgp/rng.hpp"

namespace graphgp {

struct SolverSettings {
    int population_size = 5000;
    int n_sweeps = 400;            // hard cap; convergence usually stops earlier
    int min_sweeps = 16;           // never declare convergence before this
    long epsilon_samples = 200000; // final learning-curve estimate
    long calibration_samples = 2000000;
    long convergence_samples = 10000; // per-sweep estimate for the stop rule
    double convergence_tol = 1e-4;    // deterministic floor of the stop rule
    int convergence_window = 8;       // sweeps per window in the stop rule
    int averaging_sweeps = 10;        // final-estimate evaluations (see below)
    double gamma_tail_margin = 30.0;  // Poisson truncation margin
};

void validate_solver_settings(const SolverSettings& settings);

struct GlobalSolverConfig {
    DegreeDistribution dist;
    KernelParams params;
    double sigma2 = 0.1;
    double nu = 0.0;
    double kappa = 1.0;
    SolverSettings settings;
    std::uint64_t seed = 1;
};

struct PopulationDiagnostics {
    int sweeps_run = 0;
    bool converged = false;
    long failed_updates = 0;            // singular update results, discarded
    long nonpositive_normalizer = 0;    // local solver: v <= 0 at an update
    long nonpositive_m00 = 0;           // estimator: (M_d^{-1})_00 <= 0 discards
    long annihilation_violations = 0;   // gamma=0 message with nonzero first column
};

struct GlobalPopulation {
    CavityModel model;
    std::vector<Eigen::MatrixXd> members;
    PopulationDiagnostics diagnostics;
};

// V = rank_one_regularized_inverse(O_base(d) - sum_i X V^i X, s) with
// s = (gamma/sigma2)/(d kappa); gamma = 0 gives s = 0 and a message whose
// first row/column vanish. incoming must hold d-1 messages.
Eigen::MatrixXd update_message_global(
    const CavityModel& model, const std::vector<const Eigen::MatrixXd*>& incoming,
    int d, int gamma, double kappa, double sigma2);

// Initialize every member as a leaf message (d=1, gamma sampled), then run
// sweeps of single-member updates (degree size-biased, gamma ~ Poisson(nu),
// d-1 donors uniform with replacement, one uniformly chosen member
// overwritten). After each sweep the learning-curve value is estimated with
// common random numbers, so successive values differ only through drift of
// the population itself. The run stops once the means of the last two
// disjoint convergence_window-sized blocks of these estimates agree within
// max(convergence_tol * |mean|, a 2-sigma allowance from the within-block
// scatter) — i.e. once no trend is detectable above the stationary
// population noise — or when n_sweeps is exhausted (converged = false).
GlobalPopulation run_population_global(const GlobalSolverConfig& config);

struct EpsilonEstimate {
    double epsilon = 0.0;
    double std_err = 0.0;
    long n_samples = 0;
    long discarded = 0;
};

// Monte-Carlo average over d ~ p(d) (not size-biased) and d sampled members
// of the exact truncated-Poisson expectation over the example count:
//   1/(gamma/sigma2 + d kappa (M_d^{-1})_00),
// with the isolated-vertex (d=0) contribution 1/(gamma/sigma2 + kappa/(1-1/a)^p)
// handled analytically. Nonpositive (M_d^{-1})_00 samples are discarded and
// counted.
EpsilonEstimate epsilon_global(const GlobalPopulation& population,
                               const DegreeDistribution& dist, double nu,
                               double kappa, double sigma2, long n_samples,
                               rng_t& rng, double gamma_tail_margin = 30.0,
                               PopulationDiagnostics* diagnostics = nullptr);

struct GlobalSolution {
    GlobalPopulation population; // state after the last averaging sweep
    EpsilonEstimate estimate;
};

// Full solver for one (sigma2, nu) point: run the population to convergence,
// then alternate averaging_sweeps evaluations of epsilon_samples /
// averaging_sweeps tuples with two decorrelation sweeps between them. The
// returned estimate averages the evaluations and its std_err is their
// empirical scatter, which includes the population-realization noise a
// single-population evaluation cannot see.
GlobalSolution solve_global(const GlobalSolverConfig& config);

// Run the solver with kappa = 1 at nu = 0 and return the resulting error: the
// ensemble-average unnormalized prior variance, which is exactly the global
// normalizer that makes epsilon(0) = 1. When diagnostics is non-null it
// receives the calibration run's counters (estimator discards included).
double calibrate_kappa(const DegreeDistribution& dist, const KernelParams& params,
                       double sigma2, const SolverSettings& settings,
                       std::uint64_t seed,
                       PopulationDiagnostics* diagnostics = nullptr);

struct PopulationStats {
    Histogram raw_v00;        // message (0,0) entries over members
    Histogram proxy_variance; // marginal posterior-variance proxy over fresh tuples
};

// Raw V_00 histogram over the population, and the histogram of
// w = 1/(gamma/sigma2 + d kappa (M_d^{-1})_00) over freshly drawn
// (d, gamma, members) tuples with gamma sampled (not averaged).
PopulationStats export_population_stats(const GlobalPopulation& population,
                                        const DegreeDistribution& dist, double nu,
                                        double kappa, double sigma2,
                                        long n_proxy_samples, int n_bins,
                                        rng_t& rng);

// Largest entrywise standard deviation across the population; the collapse
// diagnostic for deterministic fixed points.
double population_entrywise_stddev_max(const GlobalPopulation& population);

} // namespace graphgp
