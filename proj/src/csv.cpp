#include "metaline/csv.hpp"

#include <cmath>

#include <fmt/format.h>

#include "metaline/error.hpp"

namespace metaline {

std::string format_cell(const CsvCell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    // Avoid "-0.00000000000e+00" in otherwise identical runs.
    return fmt::format("{:.11e}", *d == 0.0 ? 0.0 : *d);
  }
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

CsvWriter::CsvWriter(const std::string& path, std::string_view command,
                     std::string_view config_hash, const std::vector<std::string>& columns)
    : path_(path), columns_(columns.size()), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError(fmt::format("cannot write '{}'", path));
  out_ << "# metaline " << kVersion << '\n';
  out_ << "# command: " << command << '\n';
  out_ << "# config_hash: " << config_hash << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != columns_) {
    throw DomainError(fmt::format("{}: row has {} cells, header has {}", path_, cells.size(),
                                  columns_));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << format_cell(cells[i]);
  out_ << '\n';
  if (!out_) throw IoError(fmt::format("write to '{}' failed", path_));
}

void CsvWriter::comment(std::string_view text) { out_ << "# " << text << '\n'; }

}  // namespace metaline
