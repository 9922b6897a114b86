// Curve comparison: per-key relative deviations between two CSVs sharing the
// (ensemble, normalization, a, p, sigma2, nu) key set, with max/median
// summaries and an optional tolerance gate.
#pragma once

#include <string>
#include <vector>

#include "graphgp/csv.hpp"

namespace graphgp {

struct CompareRow {
    std::string ensemble;
    std::string normalization;
    double a = 0.0;
    int p = 0;
    double sigma2 = 0.0;
    double nu = 0.0;
    double epsilon_a = 0.0;
    double stderr_a = 0.0;
    double epsilon_b = 0.0;
    double stderr_b = 0.0;
    double rel_dev = 0.0;        // |eps_a - eps_b| / |eps_b|
    double combined_stderr = 0.0; // sqrt(stderr_a^2 + stderr_b^2)
};

struct CompareReport {
    std::vector<CompareRow> rows; // sorted by key
    double max_rel_dev = 0.0;
    double median_rel_dev = 0.0;
};

// Throws config_error when either side has duplicate keys or the key sets
// differ (the message lists the offending keys). File B is the reference in
// the relative deviation.
CompareReport compare_curves(const std::vector<CurveRow>& rows_a,
                             const std::vector<CurveRow>& rows_b);

// Human-readable table plus the two summary lines
// 'max_relative_deviation=...' and 'median_relative_deviation=...'.
std::string format_compare_report(const CompareReport& report);

} // namespace graphgp
