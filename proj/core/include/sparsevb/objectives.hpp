#pragma once

#include "sparsevb/data.hpp"
#include "sparsevb/state.hpp"
#include "sparsevb/types.hpp"

namespace sparsevb {

// log(sqrt(pi) / sqrt(2)), the normalizing-constant piece shared by the
// coordinate objectives and the evidence bound.
inline constexpr double kLogSqrtPiOver2 = 0.22579135264472741;

// The coordinate objectives below are the per-coordinate slices of the
// KL divergence between the mean-field family and the posterior, up to
// additive constants. Each is minimized in turn by the coordinate-ascent
// loop. `cross` always denotes sum_{k != i} (X^T X)_{ik} gamma_k mu_k.

// Recomputes the cross term as a full dot product against gram row i minus
// the diagonal contribution. O(p); simpler and numerically safer than
// incremental residual maintenance.
double cross_term(Index i, const VariationalState& state, const RegressionData& data);

// mu-slice, conditional on inclusion:
//   f(mu) = mu * cross + d/2 * mu^2 - yx * mu + lambda * E|theta|
// with d = (X^T X)_{ii}, yx = (Y^T X)_i and E|theta| the folded normal mean.
double eval_f_mu_terms(double mu_i, double cross, double d_ii, double yx_i,
                       double sigma_i, double lambda);
double eval_f_mu(double mu_i, Index i, const VariationalState& state,
                 const RegressionData& data, double lambda);

// sigma-slice, conditional on inclusion (exact conditional-KL form):
//   g(sigma) = d/2 * sigma^2 + lambda * E|theta| - log sigma.
// Throws InvalidInputError for sigma_i <= 0.
double eval_g_sigma_terms(double sigma_i, double mu_i, double d_ii, double lambda);
double eval_g_sigma(double sigma_i, Index i, const VariationalState& state,
                    const RegressionData& data, double lambda);

// Log odds of the optimal inclusion probability:
//   Gamma_i = log(a0/b0) + log(sqrt(pi) sigma lambda / sqrt(2)) + yx * mu
//             - mu * cross - d/2 * (sigma^2 + mu^2) - lambda * E|theta| + 1/2.
// The caller applies logit^{-1} and gamma clamping.
double gamma_logit_terms(double cross, double d_ii, double yx_i, double mu_i,
                         double sigma_i, double lambda, double log_prior_odds);
double gamma_logit(Index i, const VariationalState& state,
                   const RegressionData& data, const PriorConfig& prior);

// Deterministic-weights variant: log(a0/b0) replaced by log(w_i / (1 - w_i)).
double gamma_logit_fixed_weights(Index i, const VariationalState& state,
                                 const RegressionData& data, double lambda,
                                 double w_i);

// gamma-slice of the conditional KL, additive constant fixed to 0:
//   h(gamma) = gamma * (B + log(b0/a0)) + gamma log gamma + (1-gamma) log(1-gamma)
// where B collects the data and slab terms; endpoints use 0 log 0 = 0.
// Identities relied on by tests: h(0) = 0, h(1) = B + log(b0/a0),
// gamma_logit = h(0) - h(1), and dh/dgamma vanishes at logit^{-1}(Gamma_i).
// Throws InvalidInputError for gamma_i outside [0, 1].
double eval_h(double gamma_i, Index i, const VariationalState& state,
              const RegressionData& data, const PriorConfig& prior);

}  // namespace sparsevb
