#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fxtails {

// Minimal CSV support for the flat numeric tables this tool reads and writes.
// No quoting or escaping: none of the documented schemas need it, and a stray
// quote character is rejected as malformed input.

struct CsvRow {
    std::size_t line_number = 0;  // 1-based line in the source file
    std::vector<std::string> cells;
};

// Reads all rows. Skips blank lines. Throws ParseError (with line number) on
// quote characters or unreadable files.
std::vector<CsvRow> read_csv(const std::string& path);

// Splits one line on commas; cells are whitespace-trimmed.
std::vector<std::string> split_csv_line(const std::string& line);

// Parses a decimal cell; throws ParseError naming the line/column on failure.
double parse_double_cell(const std::string& cell, std::size_t line, std::size_t col);

// Shortest representation that round-trips through parsing (std::to_chars).
std::string format_double(double v);

}  // namespace fxtails
