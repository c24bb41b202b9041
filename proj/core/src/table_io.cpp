#include "popscope/table_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "popscope/error.hpp"

namespace popscope::io {

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::require_column(std::string_view name,
                                  std::string_view context) const {
  if (auto c = column(name)) return *c;
  throw ValidationError(
      fmt::format("{}: missing required column '{}'", context, name));
}

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split_tsv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

// Reads one logical CSV record, which may span several physical lines.
bool read_csv_record(std::istream& in, std::size_t& line_no,
                     std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;
  strip_cr(line);
  std::string field;
  bool in_quotes = false;
  bool was_quoted = false;
  for (std::size_t i = 0;; ++i) {
    if (i == line.size()) {
      if (in_quotes) {
        field.push_back('\n');
        if (!std::getline(in, line)) {
          throw ValidationError(
              fmt::format("line {}: unterminated quoted field", line_no));
        }
        ++line_no;
        strip_cr(line);
        i = static_cast<std::size_t>(-1);
        continue;
      }
      fields.push_back(std::move(field));
      return true;
    }
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      in_quotes = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(c);
    }
  }
}

bool is_blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && fields[0].empty();
}

}  // namespace

Table read_table(std::istream& in, Format format) {
  Table table;
  std::size_t line_no = 0;
  std::vector<std::string> fields;
  auto next = [&](std::size_t& start_line) -> bool {
    for (;;) {
      start_line = line_no + 1;
      if (format == Format::Csv) {
        if (!read_csv_record(in, line_no, fields)) return false;
      } else {
        std::string line;
        if (!std::getline(in, line)) return false;
        ++line_no;
        strip_cr(line);
        fields = split_tsv(line);
      }
      if (!is_blank(fields)) return true;
    }
  };
  std::size_t start_line = 0;
  if (!next(start_line)) throw ValidationError("empty file: header row missing");
  if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    fields[0].erase(0, 3);
  }
  table.header = fields;
  while (next(start_line)) {
    if (fields.size() != table.header.size()) {
      throw ValidationError(fmt::format("line {}: expected {} fields, found {}",
                                        start_line, table.header.size(),
                                        fields.size()));
    }
    table.rows.push_back(Row{start_line, fields});
  }
  return table;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  return in;
}

Table read_table(const std::filesystem::path& path, Format format) {
  auto in = open_input(path);
  try {
    return read_table(in, format);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_field(fields[i]);
  }
  return out;
}

std::string tsv_field(std::string_view value) {
  std::string out(value);
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

std::string fixed(double value, int digits) {
  // Avoid printing "-0.000000".
  std::string s = fmt::format("{:.{}f}", value, digits);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

std::optional<long long> parse_int(std::string_view s) {
  while (!s.empty() && (s.front() == ' ')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError(fmt::format("cannot move '{}' to '{}': {}", tmp.string(),
                              path.string(), ec.message()));
  }
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  return sha256_hex(read_file(path));
}

}  // namespace popscope::io
