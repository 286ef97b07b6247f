#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "nfc/numeric.hpp"

namespace nfc::report {

// Column-ordered table; rational values occupy a "x" (p/q) column plus a
// "x_decimal" column added by the caller.
struct Cell {
  std::string text;
  bool quote_hint = false;  // force CSV quoting (free text)
};

class Table {
 public:
  explicit Table(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

Cell cell(const std::string& s);
Cell cell(const char* s);
Cell cell(long long v);
Cell cell(bool v);
Cell cell_index(Index v);
// "p/q" cell; pair with cell_decimal for the companion column.
Cell cell_rat(const Rat& q);
Cell cell_decimal(const Rat& q);

void write_csv(std::ostream& os, const Table& t);
// One top-level object {"meta": ..., "rows": [...]} with the config echo.
void write_json(std::ostream& os, const Table& t,
                const std::vector<std::pair<std::string, std::string>>& meta);

}  // namespace nfc::report
