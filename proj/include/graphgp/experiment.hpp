// Experiment orchestration: runs the requested methods over the
// (sigma2, nu) grid across worker threads and writes curve CSVs, histogram
// CSVs, and the manifest. Every grid point consumes a seed derived from the
// experiment seed and the point's indices, so outputs are byte-identical for
// any thread count.
#pragma once

#include <vector>

#include "graphgp/config.hpp"
#include "graphgp/csv.hpp"
#include "graphgp/manifest.hpp"

namespace graphgp {

struct ExperimentResult {
    std::vector<CurveRow> rows; // all curve rows, in output order
    ManifestData manifest;
    std::vector<std::string> output_files; // paths actually written
    bool all_converged = true;
};

// n_threads: 0 = hardware concurrency, 1 = serial. Writes
// <output_dir>/<method>.csv per curve method,
// <output_dir>/histogram_nu_<nu>.csv per histogram point, and
// <output_dir>/manifest.json. Throws config_error on invalid configuration
// (including an empty or duplicated method list).
ExperimentResult run_experiment(const ExperimentConfig& config, int n_threads);

} // namespace graphgp
