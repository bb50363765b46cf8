#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sieverank/sample.hpp"

namespace sieverank {

/// Which CSV columns form y, z and w, and which cell strings mean "missing".
struct DatasetSchema {
    std::string y_column;
    std::vector<std::string> z_columns;
    std::vector<std::string> w_columns;
    std::set<std::string> missing_tokens{"", "NA", "NaN"};

    /// Throws ConfigError on an empty y column or duplicated names.
    void validate() const;
    std::vector<std::string> all_columns() const;
};

struct IngestionReport {
    std::size_t rows_read = 0;
    std::size_t rows_dropped = 0;
    std::map<std::string, std::size_t> missing_per_column;  // missing cells per selected column
};

struct LoadedData {
    Sample sample;
    IngestionReport report;
};

/// Reads the selected columns, dropping every row with a missing cell in any
/// of them (listwise deletion). Throws DataError for a missing file or
/// column, a non-numeric cell that is not a missing token (with row and
/// column), or when no complete rows remain.
LoadedData load_csv(const std::filesystem::path& path, const DatasetSchema& schema);

/// Writes the sample with the schema's column names, exact to the last bit.
void write_sample_csv(const std::filesystem::path& path, const Sample& sample, const DatasetSchema& schema);

struct SixNumberSummary {
    double min = 0.0, q1 = 0.0, median = 0.0, mean = 0.0, q3 = 0.0, max = 0.0;
};

/// Min, quartiles (type-7 linear interpolation), mean, max.
/// Throws ConfigError on empty input.
SixNumberSummary summary_stats(std::span<const double> values);

}  // namespace sieverank
