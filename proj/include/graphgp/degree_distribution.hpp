// Degree distributions of the random-graph ensembles: regular, Poisson
// (Erdos-Renyi in the sparse limit), Pareto-mixed Poisson (power-law-like),
// and arbitrary empirical tables. The distribution is held as a truncated,
// renormalized pmf plus sampling tables; the Pareto-mixed pmf is computed
// analytically through the upper incomplete gamma function.
#pragma once

#include <string>
#include <vector>

#include "graphgp/rng.hpp"

namespace graphgp {

enum class DegreeKind { regular, poisson, pareto_mixed_poisson, empirical };

class DegreeDistribution {
public:
    // Defaults to regular(0): a point mass at degree zero.
    DegreeDistribution();

    static DegreeDistribution regular(int degree);
    static DegreeDistribution poisson(double mean);
    static DegreeDistribution pareto_mixed_poisson(double alpha, double lambda_min);
    static DegreeDistribution empirical(const std::vector<double>& weights);

    DegreeKind kind() const { return kind_; }
    const std::string& name() const { return name_; }

    // Truncated pmf table p(0..max_degree): nonnegative, sums to 1 within
    // 1e-12, covers >= 1-1e-8 of the untruncated mass.
    const std::vector<double>& pmf() const { return pmf_; }
    int max_degree() const { return static_cast<int>(pmf_.size()) - 1; }

    // p(d); zero beyond the truncation point. Throws std::domain_error for
    // negative d.
    double pmf_at(int d) const;

    double mean_degree() const { return mean_degree_; }

    // d ~ p(d)
    int sample(rng_t& rng) const;

    // d ~ p(d) d / mean(d): the degree of a vertex reached along a random
    // edge. Throws config_error when all mass sits at d=0.
    int size_biased_sample(rng_t& rng) const;

    // n_vertices i.i.d. degrees; if the sum is odd, one uniformly chosen entry
    // is resampled until the sum is even (bounded retries; impossible parities
    // such as all-odd-degree sequences of odd length raise config_error).
    // For the Pareto-mixed kind each entry is drawn per-vertex as
    // lambda ~ Pareto(alpha, lambda_min), d ~ Poisson(lambda), which realizes
    // the same marginal law as the analytic pmf.
    std::vector<int> sample_degree_sequence(int n_vertices, rng_t& rng) const;

private:
    void finalize_tables();
    int sample_one_for_sequence(rng_t& rng) const;

    DegreeKind kind_ = DegreeKind::regular;
    std::string name_;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
    std::vector<double> size_biased_cdf_; // empty when mean_degree_ == 0
    double mean_degree_ = 0.0;
    double alpha_ = 0.0;      // pareto_mixed_poisson only
    double lambda_min_ = 0.0; // pareto_mixed_poisson only
};

// Free-function spelling of the pmf lookup.
inline double degree_pmf(const DegreeDistribution& dist, int d) {
    return dist.pmf_at(d);
}

} // namespace graphgp
