// Reading and writing the shared curve CSV schema and histogram CSVs.
// Doubles are written in shortest round-trip form, so rewriting a parsed
// file reproduces it byte for byte.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphgp/histogram.hpp"

namespace graphgp {

inline constexpr const char* kCurveCsvHeader =
    "method,ensemble,normalization,a,p,sigma2,nu,epsilon,stderr,n_samples,seed";

struct CurveRow {
    std::string method;
    std::string ensemble;
    std::string normalization;
    double a = 0.0;
    int p = 0;
    double sigma2 = 0.0;
    double nu = 0.0;
    double epsilon = 0.0;
    double std_err = 0.0;
    long n_samples = 0;
    std::uint64_t seed = 0;
};

// Throws std::runtime_error when the file cannot be written.
void write_curve_csv(const std::string& path, const std::vector<CurveRow>& rows);

// Throws config_error on a missing file, wrong header, or malformed rows.
std::vector<CurveRow> read_curve_csv(const std::string& path);

struct NamedHistogram {
    std::string quantity;
    Histogram histogram;
};

// Header: quantity,bin_lo,bin_hi,density. Densities are normalized over the
// in-range samples, so they integrate to one whenever any sample landed
// inside the range.
void write_histogram_csv(const std::string& path,
                         const std::vector<NamedHistogram>& histograms);

} // namespace graphgp
