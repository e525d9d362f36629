#include "krig/csv.hpp"

#include <charconv>
#include <string_view>
#include <fstream>
#include <istream>

namespace krig::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

Table read_numeric_csv(std::istream& in, const std::string& source) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string_view> fields = split_fields(line);
    if (!have_header) {
      for (std::string_view f : fields) {
        if (f.empty()) throw CsvParseError(source, line_no, "empty header field");
        table.header.emplace_back(f);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size())
      throw CsvParseError(source, line_no,
                          "expected " + std::to_string(table.header.size()) + " fields, got " +
                              std::to_string(fields.size()));
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::string_view f = fields[i];
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc{} || ptr != f.data() + f.size())
        throw CsvParseError(source, line_no,
                            "field '" + std::string(f) + "' (column " + table.header[i] +
                                ") is not a number");
      row[i] = value;
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw CsvParseError(source, line_no == 0 ? 1 : line_no, "missing header row");
  return table;
}

Table read_numeric_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_numeric_csv(in, path);
}

}  // namespace krig::cli
