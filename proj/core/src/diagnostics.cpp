#include "sparsevb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sparsevb/errors.hpp"

namespace sparsevb {

namespace {

constexpr double kSubsetCap = 2e6;

void check_no_zero_column(const RegressionData& data) {
  for (Index i = 0; i < data.p; ++i) {
    if (!(data.col_norms(i) > 0.0)) {
      throw InvalidInputError("design column with 0-based index " +
                              std::to_string(i) + " has zero norm");
    }
  }
}

// C(p, s) in floating point; exact well past the 2e6 cap.
double binomial(Index p, int s) {
  double c = 1.0;
  for (int k = 1; k <= s; ++k) {
    c *= static_cast<double>(p - s + k) / static_cast<double>(k);
    if (c > 1e18) return c;  // no need to keep going
  }
  return c;
}

bool gram_is_diagonal(const Matrix& gram) {
  for (Index j = 0; j < gram.cols(); ++j) {
    for (Index i = 0; i < gram.rows(); ++i) {
      if (i != j && gram(i, j) != 0.0) return false;
    }
  }
  return true;
}

}  // namespace

double mutual_coherence(const RegressionData& data) {
  if (data.p < 2) {
    throw InvalidInputError("mutual_coherence: requires p >= 2");
  }
  check_no_zero_column(data);

  double mc = 0.0;
  for (Index i = 0; i < data.p; ++i) {
    for (Index j = i + 1; j < data.p; ++j) {
      const double r =
          std::abs(data.gram(i, j)) / (data.col_norms(i) * data.col_norms(j));
      mc = std::max(mc, r);
    }
  }
  return std::min(mc, 1.0);
}

double sparse_singular_value(const RegressionData& data, int s) {
  const Index smax = std::min(data.n, data.p);
  if (s < 1 || s > smax) {
    throw InvalidInputError("sparse_singular_value: s must lie in [1, min(n, p)] = [1, " +
                            std::to_string(smax) + "], got " + std::to_string(s));
  }
  if (!(data.x_norm > 0.0)) {
    throw InvalidInputError("sparse_singular_value: design matrix is zero");
  }
  if (binomial(data.p, s) > kSubsetCap) {
    throw InvalidInputError(
        "sparse_singular_value: C(p, s) exceeds the enumeration cap of 2e6 "
        "subsets; use a smaller s (no sampling fallback is provided)");
  }

  if (gram_is_diagonal(data.gram)) {
    // Orthogonal columns: every support's smallest eigenvalue is its
    // smallest diagonal entry, so the global minimum is the smallest
    // diagonal entry overall.
    return std::sqrt(data.gram.diagonal().minCoeff()) / data.x_norm;
  }

  std::vector<Index> support(static_cast<std::size_t>(s));
  for (int k = 0; k < s; ++k) support[static_cast<std::size_t>(k)] = k;

  Matrix sub(s, s);
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  double min_eig = std::numeric_limits<double>::infinity();

  while (true) {
    for (int a = 0; a < s; ++a) {
      for (int b = 0; b < s; ++b) {
        sub(a, b) = data.gram(support[static_cast<std::size_t>(a)],
                              support[static_cast<std::size_t>(b)]);
      }
    }
    solver.compute(sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericError("sparse_singular_value: eigendecomposition failed");
    }
    min_eig = std::min(min_eig, solver.eigenvalues().minCoeff());

    // Advance to the next size-s subset in lexicographic order.
    int k = s - 1;
    while (k >= 0 &&
           support[static_cast<std::size_t>(k)] == data.p - s + k) {
      --k;
    }
    if (k < 0) break;
    ++support[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < s; ++j) {
      support[static_cast<std::size_t>(j)] =
          support[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  return std::sqrt(std::max(min_eig, 0.0)) / data.x_norm;
}

CompatibilityReport compatibility_report(const RegressionData& data, int s_max) {
  if (s_max < 1) {
    throw InvalidInputError("compatibility_report: s_max must be at least 1");
  }

  CompatibilityReport report;
  report.mc = mutual_coherence(data);
  report.x_norm = data.x_norm;
  report.col_norm_min_ratio = data.col_norms.minCoeff() / data.x_norm;

  const double phi1_sq = report.col_norm_min_ratio * report.col_norm_min_ratio;
  for (int s = 1; s <= s_max; ++s) {
    const double phi = sparse_singular_value(data, s);
    const double lower = phi1_sq - static_cast<double>(s) * report.mc;
    if (phi * phi < lower - 1e-9) {
      throw NumericError(
          "compatibility_report: coherence lower bound violated at s = " +
          std::to_string(s) + " (phi^2 = " + std::to_string(phi * phi) +
          " < " + std::to_string(lower) + "); this indicates a defect");
    }
    report.phi_tilde.push_back(phi);
    if (phi * phi < 0.01) report.flagged.push_back(s);
  }
  report.lemma_d1_verified = true;
  return report;
}

}  // namespace sparsevb
