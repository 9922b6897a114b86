// Run manifest: configuration hash, seed, code version, calibration result,
// and per-point solver diagnostics — everything needed to audit a run and
// reproduce it bit for bit.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphgp/config.hpp"

namespace graphgp {

inline constexpr const char* kCodeVersion = "graphgp 0.1.0";

std::uint64_t fnv1a64(const std::string& text);

struct PointRecord {
    std::string method;
    double sigma2 = 0.0;
    double nu = 0.0;
    std::uint64_t seed = 0;
    long n_samples = 0;
    // Solver diagnostics; identically zero (with converged = true) for the
    // simulator, which has no fixed-point iteration.
    int sweeps_run = 0;
    bool converged = true;
    long failed_updates = 0;
    long nonpositive_normalizer = 0;
    long nonpositive_m00 = 0;
    long annihilation_violations = 0;
    long discarded = 0;
};

struct ManifestData {
    ExperimentConfig config;
    std::vector<PointRecord> points;
    double kappa_hat = 1.0;
    bool kappa_valid = false; // true only when a calibration ran
    bool all_converged = true;
    std::vector<std::string> output_files;
};

std::string manifest_json(const ManifestData& data);

// Throws std::runtime_error when the file cannot be written.
void write_manifest(const std::string& path, const ManifestData& data);

} // namespace graphgp
