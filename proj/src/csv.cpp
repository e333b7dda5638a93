#include "sedsim/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "sedsim/error.hpp"

namespace sedsim::csv {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error(ErrorKind::invalid_argument, "unformattable number");
  return std::string(buf, end);
}

std::vector<double> NumericTable::column(std::size_t index) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.at(index));
  return out;
}

NumericTable read_numeric(std::istream& in, std::size_t expected_columns) {
  NumericTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    auto cells = split(stripped);
    if (cells.size() != expected_columns) {
      throw Error(ErrorKind::parse_error,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(expected_columns) + " columns, found " +
                      std::to_string(cells.size()));
    }
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      const auto& cell = cells[c];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw Error(ErrorKind::parse_error, "line " + std::to_string(line_no) + ", column " +
                                                std::to_string(c + 1) + ": not a number: '" +
                                                cell + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(ErrorKind::parse_error, "missing header line");
  return table;
}

NumericTable read_numeric_file(const std::filesystem::path& path, std::size_t expected_columns) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse_error, "cannot open " + path.string());
  try {
    return read_numeric(in, expected_columns);
  } catch (const Error& e) {
    throw Error(ErrorKind::parse_error, path.string() + ": " + e.what());
  }
}

Writer::Writer(std::vector<std::string> header) : header_(std::move(header)) {}

void Writer::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw Error(ErrorKind::invalid_argument, "row width does not match header");
  }
  rows_.push_back(std::move(cells));
}

void Writer::add_numeric_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_row(std::move(cells));
}

std::string Writer::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& row : rows_) emit(row);
  return out;
}

}  // namespace sedsim::csv
