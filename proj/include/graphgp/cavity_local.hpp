// Population-dynamics solver for the locally normalized kernel. Each
// population member is a joint pair of messages evolved with shared
// randomness: an auxiliary message describing the unnormalized prior
// (no observations) and a main message carrying the observations through
// the per-vertex normalizers.
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "graphgp/cavity_core.hpp"
#include "graphgp/cavity_global.hpp"
#include "graphgp/degree_distribution.hpp"
#include "graphgp/kernel.hpp"
#include "graphgp/rng.hpp"

namespace graphgp {

struct LocalPair {
    Eigen::MatrixXd v_aux;
    Eigen::MatrixXd v_main;
};

struct LocalSolverConfig {
    DegreeDistribution dist;
    KernelParams params;
    double sigma2 = 0.1;
    double nu = 0.0;
    SolverSettings settings;
    std::uint64_t seed = 1;
};

struct LocalPopulation {
    CavityModel model;
    std::vector<LocalPair> members;
    PopulationDiagnostics diagnostics;
};

struct LocalUpdateResult {
    LocalPair pair;
    double normalizer = 0.0; // v: reciprocal unnormalized prior variance
};

// One joint update at a degree-d vertex with example count gamma:
//   1. v_aux' = reg_inv(d O1 - sum_i X v_aux^i X, 0) over the d-1 incoming
//      auxiliary parts;
//   2. the same matrix with the reverse-edge auxiliary message also
//      subtracted gives the full-vertex prior, whose reciprocal variance is
//      v = d (M~^{-1})_00;
//   3. v_main' = reg_inv(d O1 - sum_i X v_main^i X, (v/d) gamma / sigma2)
//      over the same d-1 incoming main parts (s = 0 when gamma = 0); the
//      regularizer divides the likelihood precision gamma v / sigma2 by the
//      degree, exactly as in the globally normalized update.
// Throws std::runtime_error on singular intermediates or v <= 0.
LocalUpdateResult update_pair_local(const CavityModel& model,
                                    const std::vector<const LocalPair*>& incoming,
                                    const Eigen::MatrixXd& reverse_aux, int d,
                                    int gamma, double sigma2);

// Population dynamics over message pairs. Donor indices are shared between
// the auxiliary and main assemblies of an update, which preserves the joint
// distribution; at nu = 0 the two halves of every pair stay bitwise equal, so
// the predicted error is exactly 1 with zero statistical uncertainty.
LocalPopulation run_population_local(const LocalSolverConfig& config);

// Monte-Carlo average over d ~ p(d) and d sampled member pairs of the exact
// truncated-Poisson expectation of
//   1/(gamma/sigma2 + (M_d^{-1})_00 / (M_aux,d^{-1})_00),
// where both matrices are assembled from the same member indices. Isolated
// vertices contribute 1/(gamma/sigma2 + 1) since their normalized prior
// variance is exactly one.
EpsilonEstimate epsilon_local(const LocalPopulation& population,
                              const DegreeDistribution& dist, double nu,
                              double sigma2, long n_samples, rng_t& rng,
                              double gamma_tail_margin = 30.0,
                              PopulationDiagnostics* diagnostics = nullptr);

struct LocalSolution {
    LocalPopulation population;
    EpsilonEstimate estimate;
};

// Full solve: run the population to convergence, then alternate
// averaging_sweeps evaluations of epsilon_samples / averaging_sweeps tuples
// with two decorrelation sweeps between them. The returned epsilon is their
// mean and its std_err is their empirical scatter, which includes the
// population-realization noise a single-population evaluation cannot see.
// At nu = 0 every evaluation returns exactly 1, so std_err stays 0.
LocalSolution solve_local(const LocalSolverConfig& config);

// Largest entrywise standard deviation over either half of the pairs.
double population_entrywise_stddev_max(const LocalPopulation& population);

} // namespace graphgp
