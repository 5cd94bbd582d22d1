#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sparsevb/data.hpp"
#include "sparsevb/rng.hpp"
#include "sparsevb/state.hpp"
#include "sparsevb/types.hpp"

namespace sparsevb {

enum class UpdateOrder { Prioritized, Lexicographic, Randomized };

struct FitConfig {
  UpdateOrder order = UpdateOrder::Prioritized;
  std::uint64_t seed = 0;  // RNG seed; drives the Randomized order
  double epsilon = 1e-5;   // entropy stopping threshold
  int max_sweeps = 1000;
  double init_sigma = 1.0;
  // Initial inclusion probability; defaults to the prior mean a0 / (a0 + b0).
  std::optional<double> init_gamma;
  bool track_elbo = false;
};

struct FitSummary {
  VariationalState state;
  int sweeps = 0;
  bool converged = false;
  // Negative evidence bound after each sweep, when track_elbo is set.
  std::vector<double> elbo_trace;
  std::vector<Index> order_used;
  double wall_time_s = 0.0;
};

// Which parameter a coordinate update just changed; reported to observers.
enum class UpdateKind { Mu, Sigma, Gamma };

// Called after every single-parameter update with the current state, the
// coordinate just updated, and the parameter kind. Used by tests to verify
// per-update monotonicity of the evidence bound; pass nullptr to disable.
using UpdateObserver =
    std::function<void(const VariationalState&, Index, UpdateKind)>;

// Update schedule for one sweep. Prioritized sorts by decreasing |mu0| with
// ties broken by ascending index; Lexicographic is the identity; Randomized
// is a uniform permutation drawn from rng.
std::vector<Index> update_order(UpdateOrder strategy, const Vector& mu0,
                                Xoshiro256pp& rng);

// One full coordinate sweep of the Laplace-slab CAVI updates, in the given
// order, mutating state in place. mu0 is the preliminary estimate used to
// size the mu search brackets. Returns the sweep's entropy change
// max_i |H(gamma_i) - H(gamma_i before the sweep)|.
double cavi_sweep(VariationalState& state, const RegressionData& data,
                  const PriorConfig& prior, const std::vector<Index>& order,
                  const Vector& mu0, const UpdateObserver& observer = nullptr);

// Coordinate-ascent fit of the Laplace-slab spike-and-slab variational
// posterior: mu initialized from ridge_init, sigma and gamma from config,
// coordinates updated as mu_i, sigma_i, gamma_i per sweep until the entropy
// change falls to epsilon or max_sweeps is reached. Non-convergence is
// reported via converged = false, not an error.
FitSummary cavi_fit(const RegressionData& data, const PriorConfig& prior,
                    const FitConfig& config,
                    const UpdateObserver& observer = nullptr);

// Negative evidence lower bound of the state, up to an additive constant
// independent of (mu, sigma, gamma); only differences are meaningful.
// Defined for Laplace-slab priors.
double negative_elbo(const VariationalState& state, const RegressionData& data,
                     const PriorConfig& prior);

}  // namespace sparsevb
