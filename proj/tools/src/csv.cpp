#include "csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "sparsevb/errors.hpp"

namespace sparsevb::cli {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

bool parse_cell(const std::string& raw, double& out) {
  const std::size_t first = raw.find_first_not_of(" \t\r");
  if (first == std::string::npos) return false;
  const std::size_t last = raw.find_last_not_of(" \t\r");
  const std::string cell = raw.substr(first, last - first + 1);
  char* end = nullptr;
  out = std::strtod(cell.c_str(), &end);
  return end == cell.c_str() + cell.size() && end != cell.c_str();
}

}  // namespace

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("cannot open CSV file: " + path);
  }

  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::string line;
  int line_no = 0;
  bool first_content_row = true;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const std::vector<std::string> fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_cell(fields[c], row[c])) {
        if (first_content_row) {
          numeric = false;  // header row
          break;
        }
        throw InvalidInputError(path + ": line " + std::to_string(line_no) +
                                ", field " + std::to_string(c + 1) +
                                " is not numeric: '" + fields[c] + "'");
      }
    }
    if (first_content_row) {
      first_content_row = false;
      if (!numeric) continue;  // skip the header
    }
    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      throw InvalidInputError(path + ": line " + std::to_string(line_no) + " has " +
                              std::to_string(row.size()) + " fields, expected " +
                              std::to_string(width));
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) {
    throw InvalidInputError(path + ": no data rows");
  }

  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return m;
}

Vector read_vector_csv(const std::string& path) {
  const Matrix m = read_matrix_csv(path);
  if (m.cols() != 1) {
    throw InvalidInputError(path + ": expected a single column, found " +
                            std::to_string(m.cols()));
  }
  return m.col(0);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace sparsevb::cli
