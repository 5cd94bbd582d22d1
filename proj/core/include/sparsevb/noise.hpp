#pragma once

#include "sparsevb/data.hpp"
#include "sparsevb/types.hpp"

namespace sparsevb {

// How the noise standard deviation is obtained. Known and Plugin carry the
// value to pass through; RidgeDf estimates it from the data.
struct NoiseMethod {
  enum class Kind { Known, RidgeDf, Plugin };

  Kind kind = Kind::RidgeDf;
  double value = 0.0;  // read for Known and Plugin

  static NoiseMethod known(double v) { return {Kind::Known, v}; }
  static NoiseMethod ridge_df() { return {Kind::RidgeDf, 0.0}; }
  static NoiseMethod plugin(double v) { return {Kind::Plugin, v}; }
};

struct NoiseEstimate {
  double sigma_hat = 1.0;
  NoiseMethod method;
  double df = 0.0;  // effective degrees of freedom used (0 for passthrough)
};

// Noise standard deviation for the rescaling workflow. Known(v) and
// Plugin(v) pass v through with df = 0. RidgeDf fits ridge with unit
// penalty and returns sigma_hat^2 = ||Y - X mu||^2 / (n - df) with
// df = sum_k d_k / (d_k + 1) over the eigenvalues d_k of X^T X (computed
// from the smaller of X^T X and X X^T; the spectra share every nonzero
// eigenvalue and zero eigenvalues contribute nothing).
// Requires n >= 2. Throws NumericError when the ridge fit saturates
// (df ~ n, or a zero residual), advising Known or Plugin instead.
NoiseEstimate estimate_noise_sd(const RegressionData& data, const NoiseMethod& method);

// Precomputed data for the unit-noise model: X/sigma_hat, Y/sigma_hat.
RegressionData rescale(const RegressionData& data, const NoiseEstimate& est);

}  // namespace sparsevb
