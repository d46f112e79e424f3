#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ctops::io {

/// Shortest decimal text that parses back to the same double; '.' separator.
std::string format_double(double x);

/// Strict parse of a full token as double; throws DomainError otherwise.
double parse_double(const std::string& text);

/// CSV document: '#'-prefixed "key: value" metadata lines, a header row, data rows.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws DomainError if absent
  double number(std::size_t row, const std::string& name) const;
  const std::string& meta(const std::string& key) const;  // throws DomainError if absent
};

/// LF line endings, UTF-8, no quoting (cells never contain commas).
void write_csv(std::ostream& os, const Table& table);
Table read_csv(std::istream& is);

}  // namespace ctops::io
