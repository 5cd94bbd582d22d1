#pragma once

#include "sparsevb/types.hpp"

namespace sparsevb {

// Regression data plus the precomputed products every sweep reads.
// Immutable after construction and safe to share across threads.
struct RegressionData {
  Index n = 0;        // row count
  Index p = 0;        // column count
  Matrix X;           // n x p design
  Vector Y;           // length-n response
  Matrix gram;        // p x p, X^T X, exactly symmetric as stored
  Vector yx;          // length-p, X^T Y
  Vector col_norms;   // Euclidean norm of each column
  double x_norm = 0;  // max column norm
};

// Builds a RegressionData from (X, Y). Throws InvalidInputError on dimension
// mismatch or non-finite entries.
RegressionData precompute(const Matrix& X, const Vector& Y);

// Ridge initializer: the unique solution of (X^T X + I) mu = X^T Y.
// Always well defined since the system matrix is positive definite.
Vector ridge_init(const RegressionData& data);

}  // namespace sparsevb
