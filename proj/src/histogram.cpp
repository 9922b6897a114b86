#include "graphgp/histogram.hpp"

#include <cmath>
#include <stdexcept>

namespace graphgp {

double Histogram::density(int i) const {
    if (total == 0)
        return 0.0;
    return static_cast<double>(counts[static_cast<std::size_t>(i)]) /
           (static_cast<double>(total) * bin_width());
}

Histogram make_histogram(const std::vector<double>& values, double lo, double hi,
                         int n_bins) {
    if (!(hi > lo))
        throw std::invalid_argument("make_histogram: need hi > lo");
    if (n_bins < 1)
        throw std::invalid_argument("make_histogram: need at least one bin");
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(static_cast<std::size_t>(n_bins), 0);
    const double inv_width = static_cast<double>(n_bins) / (hi - lo);
    for (double x : values) {
        if (x < lo) {
            h.underflow++;
            continue;
        }
        if (x >= hi) {
            h.overflow++;
            continue;
        }
        int bin = static_cast<int>((x - lo) * inv_width);
        if (bin >= n_bins)
            bin = n_bins - 1;
        h.counts[static_cast<std::size_t>(bin)]++;
        h.total++;
    }
    return h;
}

int count_modes(const Histogram& hist, long min_island_count) {
    int modes = 0;
    long island = 0;
    for (long c : hist.counts) {
        if (c > 0) {
            island += c;
        } else {
            if (island >= min_island_count)
                modes++;
            island = 0;
        }
    }
    if (island >= min_island_count)
        modes++;
    return modes;
}

double mass_in_range(const Histogram& hist, double lo, double hi) {
    const long all = hist.total + hist.underflow + hist.overflow;
    if (all == 0)
        return 0.0;
    long acc = 0;
    for (int i = 0; i < hist.n_bins(); ++i) {
        // Tolerate roundoff on bin edges.
        const double eps = 1e-9 * (hist.hi - hist.lo);
        if (hist.bin_lo(i) >= lo - eps && hist.bin_hi(i) <= hi + eps)
            acc += hist.counts[static_cast<std::size_t>(i)];
    }
    return static_cast<double>(acc) / static_cast<double>(all);
}

} // namespace graphgp
