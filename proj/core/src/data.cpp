#include "sparsevb/data.hpp"

#include <string>

#include "sparsevb/errors.hpp"

namespace sparsevb {

RegressionData precompute(const Matrix& X, const Vector& Y) {
  if (X.rows() < 1 || X.cols() < 1) {
    throw InvalidInputError("precompute: X must have at least one row and one column");
  }
  if (Y.size() != X.rows()) {
    throw InvalidInputError("precompute: Y has length " + std::to_string(Y.size()) +
                            " but X has " + std::to_string(X.rows()) + " rows");
  }
  if (!X.allFinite()) {
    throw InvalidInputError("precompute: X contains non-finite entries");
  }
  if (!Y.allFinite()) {
    throw InvalidInputError("precompute: Y contains non-finite entries");
  }

  RegressionData data;
  data.n = X.rows();
  data.p = X.cols();
  data.X = X;
  data.Y = Y;
  data.gram.noalias() = X.transpose() * X;
  // Copy the lower triangle over the upper one so gram is symmetric as
  // stored, not merely up to rounding.
  data.gram = data.gram.selfadjointView<Eigen::Lower>();
  data.yx.noalias() = X.transpose() * Y;
  data.col_norms = X.colwise().norm();
  data.x_norm = data.col_norms.maxCoeff();
  return data;
}

Vector ridge_init(const RegressionData& data) {
  Matrix system = data.gram;
  system.diagonal().array() += 1.0;
  Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success) {
    throw NumericError("ridge_init: Cholesky factorization of X^T X + I failed");
  }
  return llt.solve(data.yx);
}

}  // namespace sparsevb
