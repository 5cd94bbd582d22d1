#pragma once

#include <vector>

#include "sparsevb/data.hpp"
#include "sparsevb/types.hpp"

namespace sparsevb {

// Design health summary. phi_tilde[k] is the smallest scaled sparse singular
// value at support size s = k + 1; flagged lists the s with phi_tilde^2
// below 0.01. lemma_d1_verified records that the coherence lower bound
// phi_tilde(s)^2 >= phi_tilde(1)^2 - s * mc held for every computed s; a
// violation throws instead of returning, so it is true on any report that
// exists (kept as an explicit output for serialization).
struct CompatibilityReport {
  double mc = 0.0;
  double x_norm = 0.0;
  double col_norm_min_ratio = 0.0;  // phi_tilde(1) = min col norm / x_norm
  std::vector<double> phi_tilde;
  std::vector<int> flagged;
  bool lemma_d1_verified = false;
};

// Mutual coherence max_{i != j} |<X_i, X_j>| / (||X_i|| ||X_j||), clamped to
// [0, 1] (duplicated columns can round a hair above 1). Requires p >= 2 and
// no zero column; a zero column raises InvalidInputError naming its 0-based
// index.
double mutual_coherence(const RegressionData& data);

// Smallest scaled sparse singular value
//   phi_tilde(s) = min_{|S| = s} sigma_min(X_S) / ||X||
// by exhaustive enumeration of the C(p, s) supports. Requires
// 1 <= s <= min(n, p) and C(p, s) <= 2e6; beyond the cap the call is refused
// (no sampling fallback) with advice to lower s. An exactly diagonal Gram
// matrix short-circuits to sqrt(min diagonal) / ||X||.
double sparse_singular_value(const RegressionData& data, int s);

// Runs mutual_coherence and sparse_singular_value for s = 1..s_max and
// checks the coherence lower bound on every s (tolerance 1e-9). A bound
// violation is a NumericError: the inequality is a theorem, so failure
// means a defect, not unusual data.
CompatibilityReport compatibility_report(const RegressionData& data, int s_max);

}  // namespace sparsevb
