// Fixed-range uniform-bin histograms plus the small amount of structure
// analysis the population diagnostics need (mode counting, mass in a range).
#pragma once

#include <vector>

namespace graphgp {

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<long> counts;
    long total = 0;     // in-range samples
    long underflow = 0; // samples < lo
    long overflow = 0;  // samples >= hi

    int n_bins() const { return static_cast<int>(counts.size()); }
    double bin_width() const { return (hi - lo) / static_cast<double>(n_bins()); }
    double bin_lo(int i) const { return lo + bin_width() * i; }
    double bin_hi(int i) const { return lo + bin_width() * (i + 1); }
    // Probability density normalized over in-range mass.
    double density(int i) const;
};

Histogram make_histogram(const std::vector<double>& values, double lo, double hi,
                         int n_bins);

// Number of "islands": maximal runs of consecutive nonzero bins separated by
// at least one empty bin, keeping only islands holding at least
// min_island_count samples.
int count_modes(const Histogram& hist, long min_island_count);

// Fraction of all samples (including under/overflow in the denominator) that
// fall into bins entirely contained in [lo, hi].
double mass_in_range(const Histogram& hist, double lo, double hi);

} // namespace graphgp
