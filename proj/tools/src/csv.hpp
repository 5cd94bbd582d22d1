#pragma once

#include <string>

#include "sparsevb/types.hpp"

namespace sparsevb::cli {

// Reads a comma-separated numeric matrix. A first row with any non-numeric
// cell is treated as a header and skipped; every other row must be fully
// numeric and the same width. Throws InvalidInputError for unreadable files,
// ragged rows, or bad cells (messages carry 1-based file line numbers).
Matrix read_matrix_csv(const std::string& path);

// Single-column variant of read_matrix_csv.
Vector read_vector_csv(const std::string& path);

// Round-trip decimal formatting (17 significant digits) for CSV output.
std::string format_double(double v);

}  // namespace sparsevb::cli
