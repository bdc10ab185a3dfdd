#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lamimo {

/// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double value);

/// Minimal CSV writer: header on construction, one row per call.
/// Throws Error(io) if the file cannot be opened or written.
class CsvWriter {
 public:
  using Cell = std::variant<long long, double, std::string>;

  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

  void row(std::initializer_list<Cell> cells);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_ = 0;
};

/// Header plus rows of raw string fields. Blank lines and lines starting with
/// '#' are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws Error(io) if absent.
  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path, bool has_header = true);

double parse_double(std::string_view text, std::string_view context);
long long parse_int(std::string_view text, std::string_view context);

}  // namespace lamimo
