#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sedsim::csv {

// Shortest representation that round-trips to the same double.
std::string format_number(double value);

struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(std::size_t index) const;
};

// Header line followed by comma-separated numeric rows. Blank lines and lines
// starting with '#' are skipped. Throws Error(parse_error) naming the line.
NumericTable read_numeric(std::istream& in, std::size_t expected_columns);
NumericTable read_numeric_file(const std::filesystem::path& path, std::size_t expected_columns);

class Writer {
 public:
  explicit Writer(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  void add_numeric_row(const std::vector<double>& values);

  std::string str() const;
  std::size_t row_count() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace sedsim::csv
