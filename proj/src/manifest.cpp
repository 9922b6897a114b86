#include "graphgp/manifest.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "graphgp/format.hpp"

namespace graphgp {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        hash ^= static_cast<std::uint64_t>(c);
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string manifest_json(const ManifestData& data) {
    using nlohmann::json;
    const std::string config_dump = canonical_config_json(data.config);

    json root;
    root["version"] = kCodeVersion;
    root["seed"] = data.config.seed;
    root["config_hash"] = format_uint(fnv1a64(config_dump));
    root["config"] = json::parse(config_dump);
    if (data.kappa_valid)
        root["kappa"] = data.kappa_hat;
    else
        root["kappa"] = nullptr;
    root["all_converged"] = data.all_converged;
    root["output_files"] = data.output_files;

    json points = json::array();
    for (const PointRecord& point : data.points) {
        json entry;
        entry["method"] = point.method;
        entry["sigma2"] = point.sigma2;
        entry["nu"] = point.nu;
        entry["seed"] = point.seed;
        entry["n_samples"] = point.n_samples;
        entry["sweeps_run"] = point.sweeps_run;
        entry["converged"] = point.converged;
        entry["failed_updates"] = point.failed_updates;
        entry["nonpositive_normalizer"] = point.nonpositive_normalizer;
        entry["nonpositive_m00"] = point.nonpositive_m00;
        entry["annihilation_violations"] = point.annihilation_violations;
        entry["discarded"] = point.discarded;
        points.push_back(entry);
    }
    root["points"] = points;
    return root.dump(2) + "\n";
}

void write_manifest(const std::string& path, const ManifestData& data) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << manifest_json(data);
    if (!out)
        throw std::runtime_error("failed while writing '" + path + "'");
}

} // namespace graphgp
