// Small CSV reader/writer used for all tabular inputs and report outputs.
#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace enplan::csv {

/// A parsed CSV file: one header row plus data rows of equal width.
/// Blank lines and lines starting with '#' are skipped on input.
struct Table {
    std::string source;  // file name or stream label, used in error messages
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a required column; throws std::runtime_error if missing.
    std::size_t col(const std::string& name) const;
    /// Index of an optional column, -1 if absent.
    long col_optional(const std::string& name) const;

    const std::string& cell(std::size_t row, std::size_t col) const;
    bool empty_cell(std::size_t row, std::size_t col) const;

    /// Numeric accessors with file/row context in error messages.
    /// "inf" / "+inf" parse to +infinity.
    double num(std::size_t row, std::size_t col) const;
    double num_or(std::size_t row, long col, double fallback) const;
    long integer(std::size_t row, std::size_t col) const;
};

Table parse(std::istream& in, const std::string& source);
Table read_file(const std::filesystem::path& path);

/// Splits one CSV line honouring double quotes; fields are trimmed.
std::vector<std::string> split_line(const std::string& line);

/// Formats a double with round-trip precision (shortest form that parses back
/// to the same value); used everywhere byte-stable output matters.
std::string format_double(double v);

}  // namespace enplan::csv
