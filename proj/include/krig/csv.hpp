#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace krig::cli {

// Malformed CSV input; carries the 1-based line number of the offending row.
class CsvParseError : public std::runtime_error {
 public:
  CsvParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Reads a header line plus numeric rows. Every row must have exactly as many
// fields as the header; blank lines are skipped.
Table read_numeric_csv(std::istream& in, const std::string& source);
Table read_numeric_csv_file(const std::string& path);

}  // namespace krig::cli
