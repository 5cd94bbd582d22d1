#include "sparsevb/state.hpp"

#include <string>

#include "sparsevb/errors.hpp"
#include "sparsevb/special.hpp"

namespace sparsevb {

void validate_prior(const PriorConfig& prior) {
  if (prior.slab == SlabFamily::Laplace && !(prior.lambda > 0.0)) {
    throw InvalidInputError("prior: Laplace slab scale lambda must be positive, got " +
                            std::to_string(prior.lambda));
  }
  if (prior.slab == SlabFamily::Gaussian && !(prior.slab_sd > 0.0)) {
    throw InvalidInputError("prior: Gaussian slab_sd must be positive, got " +
                            std::to_string(prior.slab_sd));
  }
  if (!(prior.a0 > 0.0) || !(prior.b0 > 0.0)) {
    throw InvalidInputError("prior: a0 and b0 must be positive");
  }
  const double w = prior.prior_inclusion();
  if (!(w > 0.0 && w < 1.0)) {
    throw InvalidInputError("prior: inclusion probability a0/(a0+b0) outside (0, 1)");
  }
}

void validate_state(const VariationalState& state) {
  const Index p = state.mu.size();
  if (state.sigma.size() != p || state.gamma.size() != p) {
    throw InvalidInputError("state: mu, sigma, gamma must have equal lengths");
  }
  if (!state.mu.allFinite() || !state.sigma.allFinite() || !state.gamma.allFinite()) {
    throw InvalidInputError("state: non-finite entries");
  }
  for (Index i = 0; i < p; ++i) {
    if (!(state.sigma[i] > 0.0)) {
      throw InvalidInputError("state: sigma[" + std::to_string(i) + "] not positive");
    }
    if (state.gamma[i] < 0.0 || state.gamma[i] > 1.0) {
      throw InvalidInputError("state: gamma[" + std::to_string(i) +
                              "] outside [0, 1]");
    }
  }
}

Vector posterior_mean(const VariationalState& state) {
  return state.gamma.cwiseProduct(state.mu);
}

}  // namespace sparsevb
