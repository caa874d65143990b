#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace decaylife::io {

/// Shortest decimal text that parses back to exactly `x` (at most 17 significant digits).
std::string format_double(double x);
/// Throws InvalidParams unless the whole of `text` is a number.
double parse_double(std::string_view text);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

/// Comma-separated, header row, LF line endings.
std::string to_csv(const Table& table);
Table parse_csv(std::string_view text);
Table read_csv(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames over `path`.  Creates missing
/// parent directories.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Flat `key = value` lines; `#` starts a comment.  Later keys win.
std::map<std::string, std::string> parse_key_values(std::string_view text);
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

}  // namespace decaylife::io
