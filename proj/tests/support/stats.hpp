// Small statistics helpers for the test suite: Kolmogorov-Smirnov p-values
// and chi-square critical values (Wilson-Hilferty approximation).
#pragma once

#include <cmath>

namespace graphgp_test {

// Asymptotic KS tail probability Q(lambda) = 2 sum (-1)^{k-1} exp(-2k^2l^2)
// with the Stephens finite-n correction lambda = (sqrt(n)+0.12+0.11/sqrt(n))D.
// Conservative for discrete distributions (true p-values are larger).
inline double ks_p_value(double d_stat, long n) {
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d_stat;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-16)
            break;
    }
    const double p = 2.0 * sum;
    return std::min(1.0, std::max(0.0, p));
}

// Upper critical value of chi-square with dof degrees of freedom at the
// one-sided level corresponding to standard-normal quantile z
// (z = 2.326348 for the 1% level, 3.090232 for 0.1%).
inline double chi_square_critical(int dof, double z) {
    const double k = static_cast<double>(dof);
    const double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
    return k * t * t * t;
}

} // namespace graphgp_test
