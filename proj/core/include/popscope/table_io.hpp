#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace popscope::io {

/// One data row of a delimited file. `line` is the 1-based physical line on
/// which the row starts (the header is line 1).
struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// A parsed delimited file with its header.
struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  /// Index of a header column, if present.
  std::optional<std::size_t> column(std::string_view name) const;
  /// Index of a header column; throws ValidationError naming `context`.
  std::size_t require_column(std::string_view name,
                             std::string_view context) const;
};

enum class Format { Csv, Tsv };

/// CSV follows RFC 4180 quoting (quoted fields may contain delimiters,
/// doubled quotes and newlines). TSV is split on tabs without quoting.
/// Blank lines are skipped. A row whose field count differs from the header
/// raises ValidationError with its line number.
Table read_table(std::istream& in, Format format);
Table read_table(const std::filesystem::path& path, Format format);

/// Opens a file for reading; throws IoError naming the path on failure.
std::ifstream open_input(const std::filesystem::path& path);

/// Quotes a CSV field when it contains a delimiter, quote or line break.
std::string csv_field(std::string_view value);

/// Joins fields into one CSV line (without the trailing newline).
std::string csv_line(const std::vector<std::string>& fields);

/// Replaces tabs and line breaks with spaces so a value fits one TSV cell.
std::string tsv_field(std::string_view value);

/// Fixed-point rendering with `digits` decimals; independent of locale.
std::string fixed(double value, int digits);

/// Strict parsers used by the file readers. They reject trailing garbage.
std::optional<long long> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

/// Writes `content` to `path` via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of a byte string / of a file's contents.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace popscope::io
