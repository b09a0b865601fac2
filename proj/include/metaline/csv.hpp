#pragma once

// Comma-separated output with '#' provenance lines. Floating-point cells use
// 12 significant digits in scientific notation, so identical inputs give
// identical bytes.

#include <fstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace metaline {

inline constexpr std::string_view kVersion = "1.0.0";

using CsvCell = std::variant<double, long long, std::string>;

std::string format_cell(const CsvCell& cell);

class CsvWriter {
 public:
  /// Opens path for writing and emits the provenance header and column row.
  CsvWriter(const std::string& path, std::string_view command, std::string_view config_hash,
            const std::vector<std::string>& columns);

  void row(const std::vector<CsvCell>& cells);
  void comment(std::string_view text);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t columns_;
  std::ofstream out_;
};

}  // namespace metaline
