// Exact Gaussian-process posterior variances and Monte-Carlo learning curves
// on finite sampled graphs. In the matched scenario the Bayes error is the
// average posterior variance, so no posterior means are ever needed.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "graphgp/degree_distribution.hpp"
#include "graphgp/kernel.hpp"
#include "graphgp/rng.hpp"

namespace graphgp {

// Var_i = C_ii - C_{iS} (C_SS + Lambda_S)^{-1} C_{Si} with S = {j : n_j > 0}
// and Lambda_S = diag(sigma2 / n_j): repeated observations at a vertex are
// collapsed into a single observation with scaled noise, which is exactly
// equivalent to the N x N Gram-matrix formula and keeps the solve at V x V.
std::vector<double> posterior_variances(const Eigen::MatrixXd& C,
                                        const std::vector<int>& counts,
                                        double sigma2);

// Mean posterior variance.
double bayes_error(const Eigen::MatrixXd& C, const std::vector<int>& counts,
                   double sigma2);

struct LearningCurvePoint {
    double nu = 0.0;
    double epsilon = 0.0;
    double std_err = 0.0;
    long n_samples = 0;
};

// For each nu: sample graphs from the ensemble, build the normalized kernel,
// draw N = round(nu V) training inputs uniformly with replacement, and average
// bayes_error over all (graph, training set) pairs.
std::vector<LearningCurvePoint> simulate_learning_curve(
    const DegreeDistribution& dist, int n_vertices, const KernelParams& params,
    Normalization mode, double sigma2, const std::vector<double>& nu_grid,
    int n_graphs, int n_sets_per_graph, rng_t& rng);

} // namespace graphgp
