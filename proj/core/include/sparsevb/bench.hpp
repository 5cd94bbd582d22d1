#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sparsevb/cavi.hpp"
#include "sparsevb/rng.hpp"
#include "sparsevb/types.hpp"

namespace sparsevb {

// Which fitting engine a scenario run uses. GaussRescaled is the Gaussian
// slab with slab_sd = ||theta0||_2; it needs the true signal, so it exists
// only here in the bench, never in the data-fitting paths.
enum class Engine { Laplace, Qmf, Gauss, GaussBatch, GaussRescaled };

struct DesignSpec {
  enum class Kind { Identity, IidGaussian, Equicorrelated };
  Kind kind = Kind::IidGaussian;
  double tau = 1.0;  // entry sd for IidGaussian
  double rho = 0.0;  // off-diagonal correlation for Equicorrelated, in [0, 1)
};

struct SignalSpec {
  enum class Kind { Const, Uniform };
  Kind kind = Kind::Const;
  double amp = 1.0;          // Const amplitude
  double lo = 0.0, hi = 0.0;  // Uniform bounds
};

enum class Placement { Begin, Middle, End, Random };

struct NoiseSpec {
  enum class Kind { Gaussian, Laplace, Uniform, StudentT3 };
  Kind kind = Kind::Gaussian;
  // sd for Gaussian, scale for Laplace, half-width for Uniform; unused for
  // StudentT3.
  double param = 1.0;

  // The family's true standard deviation; used when known_variance scales
  // the data by the oracle noise level.
  double true_sd() const;
};

struct ScenarioSpec {
  Index n = 0;
  Index p = 0;
  Index s = 0;  // support size; 0 means a null signal
  DesignSpec design;
  SignalSpec signal;
  Placement placement = Placement::Begin;
  NoiseSpec noise;
  bool known_variance = true;
  int replicates = 1;
  std::uint64_t seed = 0;
  // Laplace slab scale for the Laplace-family engines; 1 when unset.
  std::optional<double> lambda;
};

void validate_scenario(const ScenarioSpec& spec);

struct ReplicateRecord {
  double l2 = 0.0;
  double fdr = 0.0;
  double tpr = 0.0;
  double runtime_s = 0.0;
  int sweeps = 0;
  bool converged = false;
};

struct MetricsReport {
  double l2_mean = 0.0, l2_sd = 0.0;
  double fdr_mean = 0.0, fdr_sd = 0.0;
  double tpr_mean = 0.0, tpr_sd = 0.0;
  double runtime_mean_s = 0.0, runtime_sd_s = 0.0;
  int replicates_completed = 0;
  std::vector<ReplicateRecord> records;  // per replicate, in index order
};

// Design draw. Identity requires n = p and consumes no randomness.
// IidGaussian fills entries row by row with tau * N(0,1). Equicorrelated
// draws, per row, a shared g ~ N(0,1) then p independent eps ~ N(0,1) and
// sets X_ij = sqrt(rho) g + sqrt(1 - rho) eps_j (unit variance, pairwise
// correlation rho).
Matrix generate_design(const ScenarioSpec& spec, Xoshiro256pp& rng);

// Signal draw: support indices per the placement rule (Middle starts the
// block at floor((p - s) / 2); Random draws s distinct indices), returned
// sorted ascending. Uniform amplitudes are drawn in ascending support order.
std::pair<Vector, std::vector<Index>> generate_signal(const ScenarioSpec& spec,
                                                      Xoshiro256pp& rng);

Vector generate_noise(const NoiseSpec& noise, Xoshiro256pp& rng, Index n);

struct Metrics {
  double l2 = 0.0;
  double fdr = 0.0;
  double tpr = 0.0;
};

// l2 = ||estimate - theta0||; a coordinate is selected when gamma > 0.5;
// fdr = |selected \ S0| / max(|selected|, 1), tpr = |selected intersect S0|
// / max(|S0|, 1), with S0 the nonzero coordinates of theta0.
Metrics metrics(const Vector& estimate, const Vector& gamma, const Vector& theta0);

// Replicated scenario run. Replicate k's data and update-order streams are
// pure functions of (spec.seed, k), so results are independent of execution
// order and thread count; replicates run on SPARSEVB_THREADS threads
// (default: hardware concurrency) and aggregate in index order. Timing per
// replicate covers precompute, noise estimation/rescaling, and the fit, but
// not data generation. known_variance = false routes through the RidgeDf
// noise estimator; true scales by the noise family's exact sd when it is
// neither 0 nor 1. A failing replicate aborts the run with its index in the
// error message.
MetricsReport run_scenario(const ScenarioSpec& spec, Engine engine,
                           const FitConfig& config);

}  // namespace sparsevb
