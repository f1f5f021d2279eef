#pragma once

// Tabular export.  CSV is header + LF rows, '.' decimals, 17 significant digits,
// independent of the C locale, so goldens compare byte for byte.

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace fockgauge::cli {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  explicit Table(std::vector<std::string> cols) : columns(std::move(cols)) {}
  void add(std::vector<Cell> row);
};

std::string format_double(double x);
std::string format_cell(const Cell& c);

void write_csv(std::ostream& os, const Table& t);
/// {"columns": [...], "rows": [[...], ...]}
void write_json(std::ostream& os, const Table& t);

} // namespace fockgauge::cli
