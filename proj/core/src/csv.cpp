#include "ldlrec/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldlrec {

namespace {

double parse_cell(const std::string& cell, std::size_t row, std::size_t col,
                  const std::string& origin) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (last[-1] == ' ' || last[-1] == '\t')) --last;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    std::ostringstream msg;
    msg << origin << ": non-numeric cell '" << cell << "' at row " << row + 1 << ", column "
        << col + 1;
    throw std::runtime_error(msg.str());
  }
  return value;
}

}  // namespace

Eigen::MatrixXd parse_csv_matrix(const std::string& text, const std::string& origin) {
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;

  std::size_t pos = 0;
  std::size_t line_index = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      ++line_index;
      continue;
    }

    std::vector<double> row;
    std::size_t cell_start = 0;
    std::size_t col = 0;
    while (true) {
      std::size_t comma = line.find(',', cell_start);
      std::string cell = line.substr(
          cell_start, comma == std::string::npos ? std::string::npos : comma - cell_start);
      row.push_back(parse_cell(cell, line_index, col, origin));
      ++col;
      if (comma == std::string::npos) break;
      cell_start = comma + 1;
    }

    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      std::ostringstream msg;
      msg << origin << ": ragged row " << line_index + 1 << " (" << row.size()
          << " cells, expected " << width << ")";
      throw std::runtime_error(msg.str());
    }
    rows.push_back(std::move(row));
    ++line_index;
  }

  if (rows.empty()) throw std::runtime_error(origin + ": empty matrix");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv_matrix(buffer.str(), path);
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf;
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_csv_binary_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (m(i, j) != 0.0 ? '1' : '0');
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ldlrec
