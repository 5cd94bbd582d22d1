#pragma once

#include "sparsevb/cavi.hpp"
#include "sparsevb/data.hpp"
#include "sparsevb/state.hpp"
#include "sparsevb/types.hpp"

namespace sparsevb {

// Hard-support variant of cavi_fit: the same mu and sigma coordinate steps,
// but gamma_i is restricted to {0, 1} and set to the endpoint minimizing the
// conditional objective (gamma_i = 1 exactly when the inclusion logit is
// positive; ties break to 0, the sparser model). Binary entropy is
// identically zero on {0, 1}, so the entropy stopping rule degenerates; the
// fit instead stops once a sweep flips no support indicator. init_gamma
// (default: the prior mean) is thresholded at 0.5 to pick the starting
// support. With track_elbo the trace uses the same negative_elbo, whose
// gamma-entropy terms vanish on hard supports.
FitSummary qmf_fit(const RegressionData& data, const PriorConfig& prior,
                   const FitConfig& config = FitConfig{},
                   const UpdateObserver& observer = nullptr);

// FitConfig whose defaults follow the printed component-wise Gaussian
// algorithm: lexicographic coordinate order.
inline FitConfig gauss_componentwise_defaults() {
  FitConfig config;
  config.order = UpdateOrder::Lexicographic;
  return config;
}

// Component-wise CAVI for Gaussian slabs with standard deviation rho =
// prior.slab_sd. Closed-form coordinate updates, in sweep order:
//   sigma_i = 1 / sqrt((X^T X)_ii + 1/rho^2)
//   mu_i    = sigma_i^2 * ((Y^T X)_i - cross_i)
//   gamma_i = logit^{-1}(log(a0/b0) + log sigma_i + mu_i^2/(2 sigma_i^2) - log rho)
// rho = 1 reduces to the unit-slab algorithm verbatim. Stopping and summary
// semantics match cavi_fit. track_elbo is rejected (the evidence bound
// implemented by negative_elbo is the Laplace-slab one).
FitSummary gauss_componentwise_fit(const RegressionData& data, const PriorConfig& prior,
                                   const FitConfig& config = gauss_componentwise_defaults(),
                                   const UpdateObserver& observer = nullptr);

// Batch-wise CAVI for unit-variance Gaussian slabs. Each sweep solves
//   mu = (X^T X + diag(gamma))^{-1} X^T Y
// then updates sigma_i = 1 / sqrt((X^T X)_ii + gamma_i) and
// gamma_i = logit^{-1}(logit(1/p) + log sigma_i + mu_i^2 / (2 sigma_i^2))
// elementwise, and applies the entropy stopping rule. The updates hard-code
// unit slab variance, so prior.slab_sd must equal 1, and logit(1/p) requires
// p >= 2. The sweep is order-free: config.order is ignored and order_used
// records the identity. If the Cholesky solve fails, a diagonal jitter of
// 1e-10 * trace(X^T X) / p is added once; a second failure raises
// NumericError describing the effective gamma diagonal. track_elbo is
// rejected as in the component-wise engine.
FitSummary gauss_batchwise_fit(const RegressionData& data, const PriorConfig& prior,
                               const FitConfig& config = FitConfig{},
                               const UpdateObserver& observer = nullptr);

}  // namespace sparsevb
