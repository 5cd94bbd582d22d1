#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "sparsevb/errors.hpp"

namespace sparsevb {

// Inclusion probabilities in soft-support states are clamped to
// [kGammaFloor, 1 - kGammaFloor] so logits and entropies stay finite.
inline constexpr double kGammaFloor = 1e-10;

// Standard normal CDF. erfc keeps full relative accuracy in the lower tail,
// where 0.5 * (1 + erf(x / sqrt(2))) would cancel.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2_v<double>);
}

// logit^{-1}(x) = 1 / (1 + e^{-x}), computed branchwise so the exponential
// argument is never positive.
inline double inv_logit(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidInputError("logit: argument " + std::to_string(p) +
                            " outside (0, 1)");
  }
  return std::log(p / (1.0 - p));
}

// x * log(y) with the 0 * log 0 = 0 convention (x == 0 always yields 0).
inline double xlogy(double x, double y) {
  if (x == 0.0) {
    return 0.0;
  }
  return x * std::log(y);
}

// Binary entropy H(p) = -p log p - (1-p) log(1-p), continuously extended so
// H(0) = H(1) = 0.
inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidInputError("binary_entropy: argument " + std::to_string(p) +
                            " outside [0, 1]");
  }
  return -xlogy(p, p) - xlogy(1.0 - p, 1.0 - p);
}

// Mean of the folded normal distribution |N(mu, sigma^2)|:
//   sigma * sqrt(2/pi) * exp(-mu^2 / (2 sigma^2)) + mu * (1 - 2 Phi(-mu/sigma)).
// The exponential underflows to 0 for large |mu/sigma|, which is the correct
// limit of the term.
inline double folded_normal_mean(double mu, double sigma) {
  const double sqrt_2_over_pi = 0.79788456080286535588;  // sqrt(2/pi)
  const double r = mu / sigma;
  return sigma * sqrt_2_over_pi * std::exp(-0.5 * r * r) +
         mu * (1.0 - 2.0 * normal_cdf(-r));
}

inline double clamp_gamma(double g) {
  if (g < kGammaFloor) {
    return kGammaFloor;
  }
  if (g > 1.0 - kGammaFloor) {
    return 1.0 - kGammaFloor;
  }
  return g;
}

}  // namespace sparsevb
