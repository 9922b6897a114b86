// Exact expectations over Poisson-distributed example counts, computed by
// truncated summation instead of sampling: the truncation point is chosen so
// the neglected tail mass is far below every tolerance used in this project.
#pragma once

#include <cmath>
#include <stdexcept>

namespace graphgp {

// Smallest count at which the summation stops; tail mass beyond
// nu + 10*sqrt(nu) + margin is < 1e-12 for the margins used here.
inline int poisson_truncation_point(double nu, double margin = 30.0) {
    if (nu < 0.0)
        throw std::invalid_argument("poisson_truncation_point: nu must be >= 0");
    return static_cast<int>(std::ceil(nu + 10.0 * std::sqrt(nu) + margin));
}

// E_{g ~ Poisson(nu)}[f(g)] for nonnegative integer argument f. For nu = 0
// this is exactly f(0) with no roundoff.
template <class F>
double poisson_expectation(double nu, F&& f, double margin = 30.0) {
    if (nu < 0.0)
        throw std::invalid_argument("poisson_expectation: nu must be >= 0");
    if (nu == 0.0)
        return f(0);
    const int gmax = poisson_truncation_point(nu, margin);
    double weight = std::exp(-nu);
    double acc = weight * f(0);
    for (int g = 1; g <= gmax; ++g) {
        weight *= nu / static_cast<double>(g);
        acc += weight * f(g);
    }
    return acc;
}

} // namespace graphgp
