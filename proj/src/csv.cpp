#include "graphgp/csv.hpp"

#include <fstream>
#include <sstream>

#include "graphgp/errors.hpp"
#include "graphgp/format.hpp"

namespace graphgp {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        const std::string::size_type comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

long parse_long_field(const std::string& text, const std::string& where) {
    try {
        std::size_t used = 0;
        const long value = std::stol(text, &used);
        if (used != text.size())
            throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw config_error(where + ": expected an integer, got '" + text + "'");
    }
}

std::uint64_t parse_u64_field(const std::string& text, const std::string& where) {
    try {
        std::size_t used = 0;
        const unsigned long long value = std::stoull(text, &used);
        if (used != text.size() || text.empty() || text[0] == '-')
            throw std::invalid_argument(text);
        return static_cast<std::uint64_t>(value);
    } catch (const std::exception&) {
        throw config_error(where + ": expected a nonnegative integer, got '" +
                           text + "'");
    }
}

double parse_double_field(const std::string& text, const std::string& where) {
    try {
        return parse_double(text);
    } catch (const std::exception&) {
        throw config_error(where + ": expected a number, got '" + text + "'");
    }
}

} // namespace

void write_curve_csv(const std::string& path, const std::vector<CurveRow>& rows) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << kCurveCsvHeader << '\n';
    for (const CurveRow& row : rows) {
        out << row.method << ',' << row.ensemble << ',' << row.normalization
            << ',' << format_double(row.a) << ',' << format_int(row.p) << ','
            << format_double(row.sigma2) << ',' << format_double(row.nu) << ','
            << format_double(row.epsilon) << ',' << format_double(row.std_err)
            << ',' << format_int(row.n_samples) << ','
            << format_uint(row.seed) << '\n';
    }
    if (!out)
        throw std::runtime_error("failed while writing '" + path + "'");
}

std::vector<CurveRow> read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open curve CSV '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw config_error("curve CSV '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kCurveCsvHeader)
        throw config_error("curve CSV '" + path + "' has unexpected header '" +
                           line + "'");

    std::vector<CurveRow> rows;
    long line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const std::vector<std::string> fields = split_fields(line);
        const std::string where =
            path + ":" + std::to_string(line_number);
        if (fields.size() != 11)
            throw config_error(where + ": expected 11 fields, got " +
                               std::to_string(fields.size()));
        CurveRow row;
        row.method = fields[0];
        row.ensemble = fields[1];
        row.normalization = fields[2];
        row.a = parse_double_field(fields[3], where);
        row.p = static_cast<int>(parse_long_field(fields[4], where));
        row.sigma2 = parse_double_field(fields[5], where);
        row.nu = parse_double_field(fields[6], where);
        row.epsilon = parse_double_field(fields[7], where);
        row.std_err = parse_double_field(fields[8], where);
        row.n_samples = parse_long_field(fields[9], where);
        row.seed = parse_u64_field(fields[10], where);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_histogram_csv(const std::string& path,
                         const std::vector<NamedHistogram>& histograms) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "quantity,bin_lo,bin_hi,density\n";
    for (const NamedHistogram& named : histograms) {
        const Histogram& h = named.histogram;
        for (int i = 0; i < h.n_bins(); ++i)
            out << named.quantity << ',' << format_double(h.bin_lo(i)) << ','
                << format_double(h.bin_hi(i)) << ','
                << format_double(h.density(i)) << '\n';
    }
    if (!out)
        throw std::runtime_error("failed while writing '" + path + "'");
}

} // namespace graphgp
