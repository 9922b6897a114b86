// Private helper shared by the two population-dynamics solvers: the
// window-mean stop rule applied to the per-sweep common-random-number
// estimates.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace graphgp {
namespace detail {

// Converged when the means of the last two disjoint `window`-sized blocks of
// the history agree within the deterministic floor tol * |mean| or within a
// 2-sigma allowance derived from the within-block scatter (i.e. no trend
// distinguishable from stationary estimator noise).
inline bool windows_agree(const std::vector<double>& history, int window,
                          double tol) {
    const std::size_t w = static_cast<std::size_t>(window);
    if (history.size() < 2 * w)
        return false;
    const std::size_t end = history.size();
    double mean_last = 0.0;
    double mean_prev = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
        mean_last += history[end - 1 - i];
        mean_prev += history[end - 1 - w - i];
    }
    mean_last /= static_cast<double>(w);
    mean_prev /= static_cast<double>(w);
    double scatter = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
        const double centered = history[end - 1 - i] - mean_last;
        scatter += centered * centered;
    }
    scatter = std::sqrt(scatter / static_cast<double>(w));
    // The difference of two independent window means scatters as
    // sqrt(2/w) * within-window sd; two sigmas give 2 * sqrt(2) = 2.83.
    const double allowance = 2.83 * scatter / std::sqrt(static_cast<double>(w));
    const double floor = tol * std::abs(mean_last);
    return std::abs(mean_last - mean_prev) <= std::max(floor, allowance);
}

} // namespace detail
} // namespace graphgp
