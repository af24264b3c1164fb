#ifndef TRAJMINE_CSV_HPP
#define TRAJMINE_CSV_HPP

#include <optional>
#include <string>
#include <vector>

namespace trajmine {

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

/// Strips leading and trailing whitespace.
std::string trim(const std::string& s);

/// Splits a CSV line on commas and trims surrounding whitespace per field.
/// The formats handled here never use quoting.
std::vector<std::string> split_csv(const std::string& line);

/// Parses a finite double; rejects trailing junk, NaN and infinities.
std::optional<double> parse_finite(const std::string& token);

/// Parses a non-negative integer.
std::optional<long> parse_non_negative(const std::string& token);

/// Reads all lines of a file (LF or CRLF). Throws DataError when unreadable.
std::vector<std::string> read_lines(const std::string& path);

/// Opens `path` for writing, creating parent directories. Throws DataError on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace trajmine

#endif
