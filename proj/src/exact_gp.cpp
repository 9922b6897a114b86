#include "graphgp/exact_gp.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace graphgp {

std::vector<double> posterior_variances(const Eigen::MatrixXd& C,
                                        const std::vector<int>& counts,
                                        double sigma2) {
    const int n = static_cast<int>(C.rows());
    if (C.cols() != n)
        throw std::invalid_argument("posterior_variances: kernel must be square");
    if (static_cast<int>(counts.size()) != n)
        throw std::invalid_argument("posterior_variances: counts size mismatch");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("posterior_variances: sigma2 must be > 0");

    std::vector<int> support;
    for (int i = 0; i < n; ++i) {
        if (counts[static_cast<std::size_t>(i)] < 0)
            throw std::invalid_argument("posterior_variances: negative count");
        if (counts[static_cast<std::size_t>(i)] > 0)
            support.push_back(i);
    }
    std::vector<double> var(static_cast<std::size_t>(n));
    if (support.empty()) {
        for (int i = 0; i < n; ++i)
            var[static_cast<std::size_t>(i)] = C(i, i);
        return var;
    }

    const int m = static_cast<int>(support.size());
    Eigen::MatrixXd reg(m, m);        // C_SS + diag(sigma2 / n_j)
    Eigen::MatrixXd cross(m, n);      // C_{S,:}
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j)
            reg(i, j) = C(support[static_cast<std::size_t>(i)],
                          support[static_cast<std::size_t>(j)]);
        reg(i, i) += sigma2 / static_cast<double>(
                                  counts[static_cast<std::size_t>(
                                      support[static_cast<std::size_t>(i)])]);
        cross.row(i) = C.row(support[static_cast<std::size_t>(i)]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(reg);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error(
            "posterior_variances: Cholesky factorization failed (kernel not PSD?)");
    const Eigen::MatrixXd solved = llt.solve(cross);
    const Eigen::VectorXd reduction =
        (cross.cwiseProduct(solved)).colwise().sum().transpose();
    for (int i = 0; i < n; ++i)
        var[static_cast<std::size_t>(i)] = C(i, i) - reduction(i);
    return var;
}

double bayes_error(const Eigen::MatrixXd& C, const std::vector<int>& counts,
                   double sigma2) {
    const std::vector<double> var = posterior_variances(C, counts, sigma2);
    double acc = 0.0;
    for (double v : var)
        acc += v;
    return acc / static_cast<double>(var.size());
}

std::vector<LearningCurvePoint> simulate_learning_curve(
    const DegreeDistribution& dist, int n_vertices, const KernelParams& params,
    Normalization mode, double sigma2, const std::vector<double>& nu_grid,
    int n_graphs, int n_sets_per_graph, rng_t& rng) {
    if (n_vertices < 1)
        throw std::invalid_argument("simulate_learning_curve: n_vertices must be >= 1");
    if (n_graphs < 1 || n_sets_per_graph < 1)
        throw std::invalid_argument(
            "simulate_learning_curve: n_graphs and n_sets_per_graph must be >= 1");
    for (double nu : nu_grid)
        if (!(nu >= 0.0))
            throw std::invalid_argument("simulate_learning_curve: nu must be >= 0");

    std::vector<std::vector<double>> values(nu_grid.size());
    std::uniform_int_distribution<int> pick_vertex(0, n_vertices - 1);
    std::vector<int> counts(static_cast<std::size_t>(n_vertices));

    for (int g = 0; g < n_graphs; ++g) {
        const Graph graph = sample_graph(dist, n_vertices, rng);
        const KernelMatrix kernel = normalize_kernel(raw_kernel(graph, params), mode);
        for (std::size_t k = 0; k < nu_grid.size(); ++k) {
            const long n_examples = std::lround(nu_grid[k] * n_vertices);
            for (int set = 0; set < n_sets_per_graph; ++set) {
                std::fill(counts.begin(), counts.end(), 0);
                for (long e = 0; e < n_examples; ++e)
                    counts[static_cast<std::size_t>(pick_vertex(rng))]++;
                values[k].push_back(bayes_error(kernel.C, counts, sigma2));
            }
        }
    }

    std::vector<LearningCurvePoint> curve(nu_grid.size());
    for (std::size_t k = 0; k < nu_grid.size(); ++k) {
        const auto& vals = values[k];
        const double n = static_cast<double>(vals.size());
        double mean = 0.0;
        for (double v : vals)
            mean += v;
        mean /= n;
        double ss = 0.0;
        for (double v : vals)
            ss += (v - mean) * (v - mean);
        const double std_err = vals.size() > 1
                                   ? std::sqrt(std::max(ss, 0.0) / (n * (n - 1.0)))
                                   : 0.0;
        curve[k] = LearningCurvePoint{nu_grid[k], mean, std_err,
                                      static_cast<long>(vals.size())};
    }
    return curve;
}

} // namespace graphgp
