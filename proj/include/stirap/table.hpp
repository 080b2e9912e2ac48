#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "stirap/error.hpp"

namespace stirap {

/// Shortest round-trip decimal form; identical across runs of the same build.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Column {
  std::string name;
  std::string unit;  // empty for dimensionless
};

/// UTF-8 columnar text: a `# key: value` provenance block, a header row of
/// `name [unit]`, then comma-separated rows.
class CsvTable {
 public:
  using Cell = std::variant<double, std::string>;

  explicit CsvTable(std::vector<Column> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw InvalidParameter("table row has the wrong number of cells");
    rows_.push_back(std::move(row));
  }

  void add_provenance(std::string key, std::string value) { provenance_.emplace_back(std::move(key), std::move(value)); }

  std::size_t rows() const { return rows_.size(); }

  std::string str() const {
    std::string out;
    for (const auto& [k, v] : provenance_) out += "# " + k + ": " + v + "\n";
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (c) out += ',';
      out += columns_[c].name;
      if (!columns_[c].unit.empty()) out += " [" + columns_[c].unit + "]";
    }
    out += '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        if (const double* d = std::get_if<double>(&row[c]))
          out += format_number(*d);
        else
          out += std::get<std::string>(row[c]);
      }
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> provenance_;
};

}  // namespace stirap
