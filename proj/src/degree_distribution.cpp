#include "graphgp/degree_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "graphgp/errors.hpp"
#include "graphgp/format.hpp"

namespace graphgp {

namespace {

constexpr double kTruncationTail = 1e-8;
// Hard cap on the pmf table length; reached only for extremely heavy tails
// (alpha close to 1), which we refuse rather than truncate silently short.
constexpr int kMaxSupport = 2'000'000;

// 16-point Gauss-Legendre rule on [-1, 1] (abscissae/weights for the positive
// half; the rule is symmetric).
constexpr int kGlPoints = 8;
constexpr double kGlNode[kGlPoints] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeight[kGlPoints] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

template <class F>
double gauss_legendre_panel(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < kGlPoints; ++i) {
        const double dx = half * kGlNode[i];
        acc += kGlWeight[i] * (f(mid + dx) + f(mid - dx));
    }
    return acc * half;
}

// Upper incomplete gamma integral(x..inf) t^{s-1} e^{-t} dt for x > 0 and the
// small |s| needed here; composite Gauss-Legendre over panels until the
// integrand is negligible.
double upper_incomplete_gamma(double s, double x) {
    if (!(x > 0.0))
        throw std::invalid_argument("upper_incomplete_gamma: x must be > 0");
    auto f = [s](double t) { return std::pow(t, s - 1.0) * std::exp(-t); };
    const double panel = 5.0;
    double acc = 0.0;
    double lo = x;
    // e^{-t} makes anything beyond x + ~250 irrelevant at double precision.
    for (int k = 0; k < 64; ++k) {
        const double hi = lo + panel;
        acc += gauss_legendre_panel(f, lo, hi);
        lo = hi;
        if (std::exp(-lo) * std::pow(lo, std::abs(s) + 1.0) < 1e-300)
            break;
    }
    return acc;
}

// pmf of the Pareto(alpha, lambda_min)-mixed Poisson law:
//   p(d) = alpha * lambda_min^alpha * Gamma_upper(d - alpha, lambda_min) / d!
// evaluated with a forward recurrence on r_d = Gamma_upper(d-alpha, lm)/d!
// that has all-positive terms once d > alpha (numerically stable); the first
// few values come from direct quadrature.
std::vector<double> pareto_mixed_pmf(double alpha, double lambda_min) {
    const double prefactor = alpha * std::pow(lambda_min, alpha);
    const double log_lm = std::log(lambda_min);
    const int d_direct = static_cast<int>(std::floor(alpha)) + 1;
    std::vector<double> pmf;
    pmf.reserve(4096);
    double cumulative = 0.0;
    double r_prev = 0.0;
    for (int d = 0; d <= kMaxSupport; ++d) {
        double r;
        if (d <= d_direct) {
            r = upper_incomplete_gamma(static_cast<double>(d) - alpha, lambda_min) /
                std::tgamma(static_cast<double>(d) + 1.0);
        } else {
            r = r_prev * ((static_cast<double>(d) - 1.0 - alpha) / static_cast<double>(d)) +
                std::exp((static_cast<double>(d) - 1.0 - alpha) * log_lm - lambda_min -
                         std::lgamma(static_cast<double>(d) + 1.0));
        }
        r_prev = r;
        const double pd = prefactor * r;
        pmf.push_back(pd);
        cumulative += pd;
        if (cumulative >= 1.0 - kTruncationTail)
            return pmf;
    }
    throw config_error(
        "pareto_mixed_poisson: degree support exceeds " + format_int(kMaxSupport) +
        " before covering 1-1e-8 of the mass (alpha too close to 1)");
}

std::vector<double> poisson_pmf(double mean) {
    if (mean == 0.0)
        return {1.0};
    std::vector<double> pmf;
    double w = std::exp(-mean);
    double cumulative = 0.0;
    for (int d = 0; d <= kMaxSupport; ++d) {
        if (d > 0)
            w *= mean / static_cast<double>(d);
        pmf.push_back(w);
        cumulative += w;
        if (cumulative >= 1.0 - kTruncationTail)
            return pmf;
    }
    throw config_error("poisson: mean too large for pmf tabulation");
}

} // namespace

DegreeDistribution::DegreeDistribution() {
    kind_ = DegreeKind::regular;
    name_ = "regular_0";
    pmf_ = {1.0};
    finalize_tables();
}

DegreeDistribution DegreeDistribution::regular(int degree) {
    if (degree < 0)
        throw config_error("regular ensemble: degree must be >= 0");
    DegreeDistribution dist;
    dist.kind_ = DegreeKind::regular;
    dist.name_ = "regular_" + format_int(degree);
    dist.pmf_.assign(static_cast<std::size_t>(degree) + 1, 0.0);
    dist.pmf_[static_cast<std::size_t>(degree)] = 1.0;
    dist.finalize_tables();
    return dist;
}

DegreeDistribution DegreeDistribution::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw config_error("poisson ensemble: mean must be finite and >= 0");
    DegreeDistribution dist;
    dist.kind_ = DegreeKind::poisson;
    dist.name_ = "poisson_" + format_double(mean);
    dist.pmf_ = poisson_pmf(mean);
    dist.finalize_tables();
    return dist;
}

DegreeDistribution DegreeDistribution::pareto_mixed_poisson(double alpha,
                                                            double lambda_min) {
    if (!(alpha > 1.0) || !std::isfinite(alpha))
        throw config_error(
            "pareto_mixed_poisson ensemble: alpha must be > 1 for a finite mean degree");
    if (!(lambda_min > 0.0) || !std::isfinite(lambda_min))
        throw config_error("pareto_mixed_poisson ensemble: lambda_min must be > 0");
    DegreeDistribution dist;
    dist.kind_ = DegreeKind::pareto_mixed_poisson;
    dist.name_ = "pareto_mixed_poisson_" + format_double(alpha) + "_" +
                 format_double(lambda_min);
    dist.alpha_ = alpha;
    dist.lambda_min_ = lambda_min;
    dist.pmf_ = pareto_mixed_pmf(alpha, lambda_min);
    dist.finalize_tables();
    return dist;
}

DegreeDistribution DegreeDistribution::empirical(const std::vector<double>& weights) {
    if (weights.empty())
        throw config_error("empirical ensemble: weight table is empty");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw config_error("empirical ensemble: weights must be finite and >= 0");
        sum += w;
    }
    if (!(sum > 0.0))
        throw config_error("empirical ensemble: weights sum to zero");
    DegreeDistribution dist;
    dist.kind_ = DegreeKind::empirical;
    dist.name_ = "empirical_" + format_int(static_cast<long long>(weights.size()) - 1);
    dist.pmf_ = weights;
    dist.finalize_tables();
    return dist;
}

void DegreeDistribution::finalize_tables() {
    // Renormalize to unit mass, drop trailing zeros, build sampling tables.
    while (pmf_.size() > 1 && pmf_.back() == 0.0)
        pmf_.pop_back();
    double sum = 0.0;
    for (double p : pmf_)
        sum += p;
    for (double& p : pmf_)
        p /= sum;
    cdf_.resize(pmf_.size());
    double acc = 0.0;
    mean_degree_ = 0.0;
    for (std::size_t d = 0; d < pmf_.size(); ++d) {
        acc += pmf_[d];
        cdf_[d] = acc;
        mean_degree_ += static_cast<double>(d) * pmf_[d];
    }
    cdf_.back() = 1.0;
    if (mean_degree_ > 0.0) {
        size_biased_cdf_.resize(pmf_.size());
        double sacc = 0.0;
        for (std::size_t d = 0; d < pmf_.size(); ++d) {
            sacc += static_cast<double>(d) * pmf_[d] / mean_degree_;
            size_biased_cdf_[d] = sacc;
        }
        size_biased_cdf_.back() = 1.0;
    }
}

double DegreeDistribution::pmf_at(int d) const {
    if (d < 0)
        throw std::domain_error("degree_pmf: d must be >= 0");
    if (d > max_degree())
        return 0.0;
    return pmf_[static_cast<std::size_t>(d)];
}

int DegreeDistribution::sample(rng_t& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end())
        --it;
    return static_cast<int>(it - cdf_.begin());
}

int DegreeDistribution::size_biased_sample(rng_t& rng) const {
    if (size_biased_cdf_.empty())
        throw config_error(
            "size_biased_sample: distribution has all mass at degree 0");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    auto it = std::lower_bound(size_biased_cdf_.begin(), size_biased_cdf_.end(), u);
    if (it == size_biased_cdf_.end())
        --it;
    return static_cast<int>(it - size_biased_cdf_.begin());
}

int DegreeDistribution::sample_one_for_sequence(rng_t& rng) const {
    if (kind_ == DegreeKind::pareto_mixed_poisson) {
        // lambda ~ Pareto(alpha, lambda_min) by inverse CDF, then d ~ Poisson(lambda).
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double u = unif(rng);
        const double lambda = lambda_min_ * std::pow(1.0 - u, -1.0 / alpha_);
        std::poisson_distribution<int> pois(lambda);
        return pois(rng);
    }
    return sample(rng);
}

std::vector<int> DegreeDistribution::sample_degree_sequence(int n_vertices,
                                                            rng_t& rng) const {
    if (n_vertices < 1)
        throw std::invalid_argument("sample_degree_sequence: n_vertices must be >= 1");
    std::vector<int> seq(static_cast<std::size_t>(n_vertices));
    long long sum = 0;
    for (auto& d : seq) {
        d = sample_one_for_sequence(rng);
        sum += d;
    }
    std::uniform_int_distribution<int> pick(0, n_vertices - 1);
    constexpr int kMaxRepairAttempts = 10000;
    int attempts = 0;
    while (sum % 2 != 0) {
        if (++attempts > kMaxRepairAttempts)
            throw config_error(
                "sample_degree_sequence: cannot reach an even degree sum for "
                "ensemble " + name_ + " with " + format_int(n_vertices) +
                " vertices");
        const int i = pick(rng);
        sum -= seq[static_cast<std::size_t>(i)];
        seq[static_cast<std::size_t>(i)] = sample_one_for_sequence(rng);
        sum += seq[static_cast<std::size_t>(i)];
    }
    return seq;
}

} // namespace graphgp
