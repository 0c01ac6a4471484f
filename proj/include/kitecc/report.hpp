#pragma once

// Tabular CLI output. CSV: snake_case header row, doubles with 17 significant
// digits. JSON: {"config": {...}, "rows": [...], "summary": {...}}.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace kitecc::report {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

enum class Format { Csv, Json };

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

std::string format_double(double x);

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const nlohmann::ordered_json& config, const Table& table,
                const nlohmann::ordered_json& summary);

}  // namespace kitecc::report
