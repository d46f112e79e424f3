#include "ctops/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "ctops/errors.hpp"

namespace ctops::io {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc()) throw DomainError("cannot format double");
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double x = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc() || res.ptr != last) {
    throw DomainError("not a number: '" + text + "'");
  }
  return x;
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw DomainError("no column '" + name + "'");
}

double Table::number(std::size_t row, const std::string& name) const {
  return parse_double(rows.at(row).at(column(name)));
}

const std::string& Table::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  throw DomainError("no metadata key '" + key + "'");
}

void write_csv(std::ostream& os, const Table& table) {
  for (const auto& [k, v] : table.metadata) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << table.columns[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

Table read_csv(std::istream& is) {
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_header && line.front() == '#') {
      const auto colon = line.find(": ");
      if (colon == std::string::npos || colon < 2) throw DomainError("bad metadata line: " + line);
      t.metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    if (!have_header) {
      t.columns = split(line, ',');
      have_header = true;
      continue;
    }
    auto cells = split(line, ',');
    if (cells.size() != t.columns.size()) {
      throw DomainError("row has " + std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (!have_header) throw DomainError("CSV has no header row");
  return t;
}

}  // namespace ctops::io
