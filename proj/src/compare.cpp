#include "graphgp/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "graphgp/errors.hpp"
#include "graphgp/format.hpp"

namespace graphgp {

namespace {

using CompareKey = std::tuple<std::string, std::string, double, int, double, double>;

CompareKey key_of(const CurveRow& row) {
    return {row.ensemble, row.normalization, row.a, row.p, row.sigma2, row.nu};
}

std::string describe_key(const CompareKey& key) {
    std::ostringstream out;
    out << std::get<0>(key) << '/' << std::get<1>(key)
        << " a=" << format_double(std::get<2>(key))
        << " p=" << format_int(std::get<3>(key))
        << " sigma2=" << format_double(std::get<4>(key))
        << " nu=" << format_double(std::get<5>(key));
    return out.str();
}

std::map<CompareKey, CurveRow> index_rows(const std::vector<CurveRow>& rows,
                                          const char* label) {
    std::map<CompareKey, CurveRow> index;
    for (const CurveRow& row : rows) {
        const auto [it, inserted] = index.emplace(key_of(row), row);
        if (!inserted)
            throw config_error(std::string("duplicate key in file ") + label +
                               ": " + describe_key(it->first));
    }
    return index;
}

} // namespace

CompareReport compare_curves(const std::vector<CurveRow>& rows_a,
                             const std::vector<CurveRow>& rows_b) {
    const std::map<CompareKey, CurveRow> index_a = index_rows(rows_a, "A");
    const std::map<CompareKey, CurveRow> index_b = index_rows(rows_b, "B");

    std::string missing;
    int n_missing = 0;
    const auto note_missing = [&](const CompareKey& key, const char* side) {
        ++n_missing;
        if (n_missing <= 20)
            missing += std::string("\n  only in ") + side + ": " +
                       describe_key(key);
    };
    for (const auto& [key, row] : index_a)
        if (index_b.find(key) == index_b.end())
            note_missing(key, "A");
    for (const auto& [key, row] : index_b)
        if (index_a.find(key) == index_a.end())
            note_missing(key, "B");
    if (n_missing > 0)
        throw config_error("curve CSVs do not share their key set (" +
                           std::to_string(n_missing) + " unmatched keys):" +
                           missing);
    if (index_a.empty())
        throw config_error("curve CSVs contain no rows to compare");

    CompareReport report;
    std::vector<double> deviations;
    for (const auto& [key, row_a] : index_a) {
        const CurveRow& row_b = index_b.at(key);
        CompareRow row;
        row.ensemble = row_a.ensemble;
        row.normalization = row_a.normalization;
        row.a = row_a.a;
        row.p = row_a.p;
        row.sigma2 = row_a.sigma2;
        row.nu = row_a.nu;
        row.epsilon_a = row_a.epsilon;
        row.stderr_a = row_a.std_err;
        row.epsilon_b = row_b.epsilon;
        row.stderr_b = row_b.std_err;
        const double diff = std::abs(row_a.epsilon - row_b.epsilon);
        if (row_b.epsilon == 0.0)
            row.rel_dev = diff == 0.0
                              ? 0.0
                              : std::numeric_limits<double>::infinity();
        else
            row.rel_dev = diff / std::abs(row_b.epsilon);
        row.combined_stderr = std::sqrt(row_a.std_err * row_a.std_err +
                                        row_b.std_err * row_b.std_err);
        report.rows.push_back(row);
        deviations.push_back(row.rel_dev);
    }

    std::sort(deviations.begin(), deviations.end());
    report.max_rel_dev = deviations.back();
    const std::size_t n = deviations.size();
    report.median_rel_dev = (n % 2 == 1)
                                ? deviations[n / 2]
                                : 0.5 * (deviations[n / 2 - 1] +
                                         deviations[n / 2]);
    return report;
}

std::string format_compare_report(const CompareReport& report) {
    std::ostringstream out;
    out << "ensemble,normalization,a,p,sigma2,nu,epsilon_a,stderr_a,"
           "epsilon_b,stderr_b,rel_dev,combined_stderr\n";
    for (const CompareRow& row : report.rows) {
        out << row.ensemble << ',' << row.normalization << ','
            << format_double(row.a) << ',' << format_int(row.p) << ','
            << format_double(row.sigma2) << ',' << format_double(row.nu) << ','
            << format_double(row.epsilon_a) << ','
            << format_double(row.stderr_a) << ','
            << format_double(row.epsilon_b) << ','
            << format_double(row.stderr_b) << ','
            << format_double(row.rel_dev) << ','
            << format_double(row.combined_stderr) << '\n';
    }
    out << "max_relative_deviation=" << format_double(report.max_rel_dev)
        << '\n';
    out << "median_relative_deviation="
        << format_double(report.median_rel_dev) << '\n';
    return out.str();
}

} // namespace graphgp
