#pragma once

#include "sparsevb/types.hpp"

namespace sparsevb {

// Per-coordinate variational parameters of the spike-and-slab mean-field
// family: theta_i ~ gamma_i * N(mu_i, sigma_i^2) + (1 - gamma_i) * delta_0.
// Owned by a single fit at a time; not concurrently mutable.
struct VariationalState {
  Vector mu;
  Vector sigma;
  Vector gamma;
};

enum class SlabFamily { Laplace, Gaussian };

// Prior configuration: slab family with its scale, and the Beta(a0, b0)
// hyperparameters on the inclusion weight.
struct PriorConfig {
  SlabFamily slab = SlabFamily::Laplace;
  double lambda = 1.0;   // Laplace slab scale; read when slab == Laplace
  double slab_sd = 1.0;  // Gaussian slab standard deviation; read when slab == Gaussian
  double a0 = 1.0;
  double b0 = 1.0;

  double prior_inclusion() const { return a0 / (a0 + b0); }
};

// Throws InvalidInputError when the prior parameters are out of domain.
void validate_prior(const PriorConfig& prior);

// Checks the state invariants: equal lengths, finite entries, sigma > 0,
// gamma in [0, 1] (endpoints allowed; the hard-support family uses exact 0/1).
// Throws InvalidInputError on violation.
void validate_state(const VariationalState& state);

// Mixture mean under the variational family: elementwise gamma_i * mu_i.
Vector posterior_mean(const VariationalState& state);

}  // namespace sparsevb
