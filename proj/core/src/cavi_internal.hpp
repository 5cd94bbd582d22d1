#pragma once

#include "sparsevb/cavi.hpp"
#include "sparsevb/data.hpp"
#include "sparsevb/state.hpp"
#include "sparsevb/types.hpp"

namespace sparsevb::detail {

// Search bracket sizes for the coordinate minimizations. Zero columns carry
// no data signal; their 1/col_norm scale term falls back to 1.
double mu_bracket_halfwidth(double mu0_i, double col_norm);
double sigma_bracket_hi(double col_norm);

// The mu and sigma coordinate updates shared by the soft-support and
// hard-support Laplace engines: minimize the exact conditional slices with
// the Brent minimizer, keeping the incumbent value whenever it already beats
// the minimizer's result (guards per-update monotonicity of the evidence
// bound against tolerance-level wiggle). `cross` must equal
// sum_{k != i} (X^T X)_{ik} gamma_k mu_k for the current state.
// Minimizer failures are rethrown with the coordinate index attached.
void laplace_mu_sigma_update(VariationalState& state, const RegressionData& data,
                             const Vector& mu0, Index i, double cross,
                             double lambda, const UpdateObserver& observer);

void check_fit_inputs(const RegressionData& data, const PriorConfig& prior,
                      const FitConfig& config, SlabFamily expected_slab);

// Initial state shared by the fit drivers: sigma_i = init_sigma and
// gamma_i = init_gamma (prior mean when unset, clamped), mu from mu0.
VariationalState make_initial_state(const Vector& mu0, const PriorConfig& prior,
                                    const FitConfig& config);

}  // namespace sparsevb::detail
