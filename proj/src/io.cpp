#include "sieverank/io.hpp"

#include <algorithm>
#include <cmath>

#include "sieverank/csv.hpp"
#include "sieverank/errors.hpp"

namespace sieverank {

void DatasetSchema::validate() const {
    if (y_column.empty()) throw ConfigError("schema: y column is required");
    const auto cols = all_columns();
    std::set<std::string> seen;
    for (const auto& c : cols) {
        if (!seen.insert(c).second) throw ConfigError("schema: column '" + c + "' is listed twice");
    }
}

std::vector<std::string> DatasetSchema::all_columns() const {
    std::vector<std::string> cols{y_column};
    cols.insert(cols.end(), z_columns.begin(), z_columns.end());
    cols.insert(cols.end(), w_columns.begin(), w_columns.end());
    return cols;
}

LoadedData load_csv(const std::filesystem::path& path, const DatasetSchema& schema) {
    schema.validate();
    const CsvTable table = read_csv_file(path);
    const auto names = schema.all_columns();
    std::vector<std::size_t> idx;
    for (const auto& name : names) idx.push_back(table.column_index(name));

    LoadedData out;
    for (const auto& name : names) out.report.missing_per_column[name] = 0;
    out.report.rows_read = table.rows.size();

    const std::size_t dz = schema.z_columns.size();
    const std::size_t dw = schema.w_columns.size();
    std::vector<double> y;
    Matrix z(0, dz);
    Matrix w(0, dw);
    std::vector<double> values(names.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        bool complete = true;
        for (std::size_t c = 0; c < names.size(); ++c) {
            const std::string& cell = table.rows[r][idx[c]];
            if (schema.missing_tokens.count(cell)) {
                ++out.report.missing_per_column[names[c]];
                complete = false;
                continue;
            }
            if (!parse_number(cell, values[c])) {
                throw DataError("row " + std::to_string(r + 1) + ", column '" + names[c] +
                                "': cannot parse '" + cell + "' as a number");
            }
        }
        if (!complete) {
            ++out.report.rows_dropped;
            continue;
        }
        y.push_back(values[0]);
        z.append_row(std::span<const double>(values).subspan(1, dz));
        w.append_row(std::span<const double>(values).subspan(1 + dz, dw));
    }
    if (y.empty()) throw DataError("no complete data rows in " + path.string());
    std::optional<Matrix> controls;
    if (dw > 0) controls = std::move(w);
    out.sample = Sample(std::move(y), std::move(z), std::move(controls));
    return out;
}

void write_sample_csv(const std::filesystem::path& path, const Sample& sample, const DatasetSchema& schema) {
    schema.validate();
    if (schema.z_columns.size() != sample.z().cols() ||
        schema.w_columns.size() != (sample.has_w() ? sample.w().cols() : 0)) {
        throw ConfigError("schema does not match the sample dimensions");
    }
    CsvTable t;
    t.header = schema.all_columns();
    for (std::size_t i = 0; i < sample.size(); ++i) {
        std::vector<std::string> row{format_exact(sample.y()[i])};
        for (double v : sample.z().row(i)) row.push_back(format_exact(v));
        if (sample.has_w()) {
            for (double v : sample.w().row(i)) row.push_back(format_exact(v));
        }
        t.rows.push_back(std::move(row));
    }
    write_csv_file(path, t);
}

SixNumberSummary summary_stats(std::span<const double> values) {
    if (values.empty()) throw ConfigError("summary statistics of an empty vector");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    auto q7 = [&](double p) {
        const double h = (static_cast<double>(v.size()) - 1.0) * p;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
    };
    double sum = 0.0;
    for (double x : v) sum += x;
    SixNumberSummary s;
    s.min = v.front();
    s.q1 = q7(0.25);
    s.median = q7(0.5);
    s.mean = sum / static_cast<double>(v.size());
    s.q3 = q7(0.75);
    s.max = v.back();
    // Rounding in the mean can push it a hair outside [min, max] for constant data.
    s.mean = std::clamp(s.mean, s.min, s.max);
    return s;
}

}  // namespace sieverank
