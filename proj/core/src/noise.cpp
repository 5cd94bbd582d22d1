#include "sparsevb/noise.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "sparsevb/errors.hpp"

namespace sparsevb {

namespace {

double ridge_df(const RegressionData& data) {
  // Eigendecompose whichever of X^T X (p x p) and X X^T (n x n) is smaller.
  Matrix m;
  if (data.p <= data.n) {
    m = data.gram;
  } else {
    m.noalias() = data.X * data.X.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("estimate_noise_sd: eigendecomposition failed");
  }
  double df = 0.0;
  for (Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double d = std::max(solver.eigenvalues()(k), 0.0);
    df += d / (d + 1.0);
  }
  return df;
}

}  // namespace

NoiseEstimate estimate_noise_sd(const RegressionData& data, const NoiseMethod& method) {
  if (data.n < 2) {
    throw InvalidInputError("estimate_noise_sd: requires n >= 2");
  }

  NoiseEstimate est;
  est.method = method;

  switch (method.kind) {
    case NoiseMethod::Kind::Known:
    case NoiseMethod::Kind::Plugin: {
      if (!(method.value > 0.0) || !std::isfinite(method.value)) {
        throw InvalidInputError(
            "estimate_noise_sd: supplied noise sd must be positive and finite");
      }
      est.sigma_hat = method.value;
      est.df = 0.0;
      return est;
    }
    case NoiseMethod::Kind::RidgeDf:
      break;
  }

  const double df = ridge_df(data);
  const double denom = static_cast<double>(data.n) - df;
  if (denom < 1e-9) {
    throw NumericError(
        "estimate_noise_sd: ridge fit is saturated (df ~ n); supply the noise "
        "sd via Known or Plugin instead");
  }

  const Vector mu = ridge_init(data);
  const double rss = (data.Y - data.X * mu).squaredNorm();
  const double sigma2 = rss / denom;
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw NumericError(
        "estimate_noise_sd: residual variance is not positive (perfect ridge "
        "fit?); supply the noise sd via Known or Plugin instead");
  }

  est.sigma_hat = std::sqrt(sigma2);
  est.df = df;
  return est;
}

RegressionData rescale(const RegressionData& data, const NoiseEstimate& est) {
  if (!(est.sigma_hat > 0.0) || !std::isfinite(est.sigma_hat)) {
    throw InvalidInputError("rescale: sigma_hat must be positive and finite");
  }
  return precompute(data.X / est.sigma_hat, data.Y / est.sigma_hat);
}

}  // namespace sparsevb
