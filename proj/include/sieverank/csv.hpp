#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sieverank {

/// A CSV file as text cells: a header row plus data rows.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws DataError naming the column if absent.
    std::size_t column_index(std::string_view name) const;
};

/// Parses comma-separated text with RFC 4180 quoting. The first record is
/// the header. Throws DataError on unterminated quotes or ragged rows.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv_file(const std::filesystem::path& path);

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::filesystem::path& path, const CsvTable& table);

/// Six significant digits, locale independent ("%.6g").
std::string format_number(double value);
/// Shortest text that parses back to exactly `value`.
std::string format_exact(double value);
/// Locale-independent strict parse of a whole cell; false if not a number.
bool parse_number(std::string_view text, double& value);

}  // namespace sieverank
