#include "nfc/report.hpp"

#include <stdexcept>

#include "json.hpp"

namespace nfc::report {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("report row width mismatch");
  rows_.push_back(std::move(row));
}

Cell cell(const std::string& s) { return Cell{s, false}; }
Cell cell(const char* s) { return Cell{std::string(s), false}; }
Cell cell(long long v) { return Cell{std::to_string(v), false}; }
Cell cell(bool v) { return Cell{v ? "true" : "false", false}; }
Cell cell_index(Index v) { return Cell{to_string(v), false}; }
Cell cell_rat(const Rat& q) { return Cell{rat_string(q), false}; }
Cell cell_decimal(const Rat& q) { return Cell{rat_decimal(q), false}; }

namespace {

std::string csv_escape(const Cell& c) {
  bool need = c.quote_hint;
  for (char ch : c.text)
    if (ch == ',' || ch == '"' || ch == '\n' || ch == '\r') need = true;
  if (!need) return c.text;
  std::string out = "\"";
  for (char ch : c.text) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns().size(); ++i)
    os << (i ? "," : "") << csv_escape(Cell{t.columns()[i], false});
  os << "\n";
  for (const auto& row : t.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << csv_escape(row[i]);
    os << "\n";
  }
}

void write_json(std::ostream& os, const Table& t,
                const std::vector<std::pair<std::string, std::string>>& meta) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta) m[k] = v;
  doc["meta"] = m;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows()) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      r[t.columns()[i]] = row[i].text;
    doc["rows"].push_back(r);
  }
  os << doc.dump(2) << "\n";
}

}  // namespace nfc::report
