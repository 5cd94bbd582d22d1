#include "sparsevb/objectives.hpp"

#include <cmath>
#include <string>

#include "sparsevb/errors.hpp"
#include "sparsevb/special.hpp"

namespace sparsevb {

namespace {

void check_coordinate(Index i, const VariationalState& state,
                      const RegressionData& data) {
  if (i < 0 || i >= data.p) {
    throw InvalidInputError("coordinate index " + std::to_string(i) +
                            " out of range for p = " + std::to_string(data.p));
  }
  if (state.mu.size() != data.p) {
    throw InvalidInputError("state dimension " + std::to_string(state.mu.size()) +
                            " does not match p = " + std::to_string(data.p));
  }
}

}  // namespace

double cross_term(Index i, const VariationalState& state, const RegressionData& data) {
  check_coordinate(i, state, data);
  const double full = data.gram.row(i).dot(state.gamma.cwiseProduct(state.mu));
  return full - data.gram(i, i) * state.gamma[i] * state.mu[i];
}

double eval_f_mu_terms(double mu_i, double cross, double d_ii, double yx_i,
                       double sigma_i, double lambda) {
  return mu_i * cross + 0.5 * d_ii * mu_i * mu_i - yx_i * mu_i +
         lambda * folded_normal_mean(mu_i, sigma_i);
}

double eval_f_mu(double mu_i, Index i, const VariationalState& state,
                 const RegressionData& data, double lambda) {
  check_coordinate(i, state, data);
  const double cross = cross_term(i, state, data);
  return eval_f_mu_terms(mu_i, cross, data.gram(i, i), data.yx[i], state.sigma[i],
                         lambda);
}

double eval_g_sigma_terms(double sigma_i, double mu_i, double d_ii, double lambda) {
  if (!(sigma_i > 0.0)) {
    throw InvalidInputError("eval_g_sigma: sigma " + std::to_string(sigma_i) +
                            " not positive");
  }
  return 0.5 * d_ii * sigma_i * sigma_i +
         lambda * folded_normal_mean(mu_i, sigma_i) - std::log(sigma_i);
}

double eval_g_sigma(double sigma_i, Index i, const VariationalState& state,
                    const RegressionData& data, double lambda) {
  check_coordinate(i, state, data);
  return eval_g_sigma_terms(sigma_i, state.mu[i], data.gram(i, i), lambda);
}

double gamma_logit_terms(double cross, double d_ii, double yx_i, double mu_i,
                         double sigma_i, double lambda, double log_prior_odds) {
  return log_prior_odds + kLogSqrtPiOver2 + std::log(sigma_i * lambda) +
         yx_i * mu_i - mu_i * cross -
         0.5 * d_ii * (sigma_i * sigma_i + mu_i * mu_i) -
         lambda * folded_normal_mean(mu_i, sigma_i) + 0.5;
}

double gamma_logit(Index i, const VariationalState& state,
                   const RegressionData& data, const PriorConfig& prior) {
  check_coordinate(i, state, data);
  const double cross = cross_term(i, state, data);
  return gamma_logit_terms(cross, data.gram(i, i), data.yx[i], state.mu[i],
                           state.sigma[i], prior.lambda,
                           std::log(prior.a0 / prior.b0));
}

double gamma_logit_fixed_weights(Index i, const VariationalState& state,
                                 const RegressionData& data, double lambda,
                                 double w_i) {
  check_coordinate(i, state, data);
  if (!(w_i > 0.0 && w_i < 1.0)) {
    throw InvalidInputError("gamma_logit_fixed_weights: weight " +
                            std::to_string(w_i) + " outside (0, 1)");
  }
  const double cross = cross_term(i, state, data);
  return gamma_logit_terms(cross, data.gram(i, i), data.yx[i], state.mu[i],
                           state.sigma[i], lambda, std::log(w_i / (1.0 - w_i)));
}

double eval_h(double gamma_i, Index i, const VariationalState& state,
              const RegressionData& data, const PriorConfig& prior) {
  check_coordinate(i, state, data);
  if (!(gamma_i >= 0.0 && gamma_i <= 1.0)) {
    throw InvalidInputError("eval_h: gamma " + std::to_string(gamma_i) +
                            " outside [0, 1]");
  }
  const double cross = cross_term(i, state, data);
  const double mu = state.mu[i];
  const double sigma = state.sigma[i];
  const double d = data.gram(i, i);
  const double lambda = prior.lambda;
  // B is the negated data/slab part of Gamma_i, so Gamma_i = h(0) - h(1).
  const double coeff =
      mu * cross + 0.5 * d * (sigma * sigma + mu * mu) - data.yx[i] * mu -
      kLogSqrtPiOver2 - std::log(sigma * lambda) - 0.5 +
      lambda * folded_normal_mean(mu, sigma);
  return gamma_i * (coeff + std::log(prior.b0 / prior.a0)) +
         xlogy(gamma_i, gamma_i) + xlogy(1.0 - gamma_i, 1.0 - gamma_i);
}

}  // namespace sparsevb
