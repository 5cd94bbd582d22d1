#include "sparsevb/cavi.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "cavi_internal.hpp"
#include "sparsevb/brent.hpp"
#include "sparsevb/errors.hpp"
#include "sparsevb/objectives.hpp"
#include "sparsevb/special.hpp"

namespace sparsevb {

namespace detail {

double mu_bracket_halfwidth(double mu0_i, double col_norm) {
  const double scale = col_norm > 0.0 ? 1.0 / col_norm : 1.0;
  return std::max(10.0, 4.0 * std::abs(mu0_i) + 10.0 * scale);
}

double sigma_bracket_hi(double col_norm) {
  const double scale = col_norm > 0.0 ? 1.0 / col_norm : 1.0;
  return 10.0 * std::max(1.0, scale);
}

void laplace_mu_sigma_update(VariationalState& state, const RegressionData& data,
                             const Vector& mu0, Index i, double cross,
                             double lambda, const UpdateObserver& observer) {
  const double d = data.gram(i, i);
  const double yx = data.yx(i);
  const double col_norm = data.col_norms(i);

  const auto rethrow_with_coordinate = [i](const NumericError& err) {
    throw NumericError("coordinate " + std::to_string(i) + ": " + err.what());
  };

  // mu step: minimize f(mu) around the incumbent, sigma held fixed.
  {
    const double sigma = state.sigma(i);
    const double mu_cur = state.mu(i);
    const double half = mu_bracket_halfwidth(mu0(i), col_norm);
    BracketSpec bracket;
    bracket.lo = mu_cur - half;
    bracket.hi = mu_cur + half;
    const auto f = [&](double m) {
      return eval_f_mu_terms(m, cross, d, yx, sigma, lambda);
    };
    try {
      const ScalarMinResult res = minimize_scalar(f, bracket);
      if (res.f_star < eval_f_mu_terms(mu_cur, cross, d, yx, sigma, lambda)) {
        state.mu(i) = res.x_star;
      }
    } catch (const NumericError& err) {
      rethrow_with_coordinate(err);
    }
  }
  if (observer) observer(state, i, UpdateKind::Mu);

  // sigma step: minimize g(sigma) with the refreshed mu.
  {
    const double mu = state.mu(i);
    const double sigma_cur = state.sigma(i);
    BracketSpec bracket;
    bracket.lo = 1e-6;
    bracket.hi = sigma_bracket_hi(col_norm);
    const auto g = [&](double s) { return eval_g_sigma_terms(s, mu, d, lambda); };
    try {
      const ScalarMinResult res = minimize_scalar(g, bracket);
      if (res.f_star < eval_g_sigma_terms(sigma_cur, mu, d, lambda)) {
        state.sigma(i) = res.x_star;
      }
    } catch (const NumericError& err) {
      rethrow_with_coordinate(err);
    }
  }
  if (observer) observer(state, i, UpdateKind::Sigma);
}

void check_fit_inputs(const RegressionData& data, const PriorConfig& prior,
                      const FitConfig& config, SlabFamily expected_slab) {
  if (prior.slab != expected_slab) {
    throw InvalidInputError("fit: prior slab family does not match the engine");
  }
  validate_prior(prior);
  if (data.p < 1 || data.n < 1) {
    throw InvalidInputError("fit: design must have at least one row and column");
  }
  if (!(config.epsilon > 0.0)) {
    throw InvalidInputError("fit: epsilon must be positive");
  }
  if (config.max_sweeps < 1) {
    throw InvalidInputError("fit: max_sweeps must be at least 1");
  }
  if (!(config.init_sigma > 0.0) || !std::isfinite(config.init_sigma)) {
    throw InvalidInputError("fit: init_sigma must be positive and finite");
  }
  if (config.init_gamma) {
    const double g0 = *config.init_gamma;
    if (!(g0 > 0.0) || !(g0 < 1.0)) {
      throw InvalidInputError("fit: init_gamma must lie strictly in (0, 1)");
    }
  }
}

VariationalState make_initial_state(const Vector& mu0, const PriorConfig& prior,
                                    const FitConfig& config) {
  const Index p = mu0.size();
  VariationalState state;
  state.mu = mu0;
  state.sigma = Vector::Constant(p, config.init_sigma);
  const double g0 = config.init_gamma ? *config.init_gamma : prior.prior_inclusion();
  state.gamma = Vector::Constant(p, clamp_gamma(g0));
  return state;
}

}  // namespace detail

std::vector<Index> update_order(UpdateOrder strategy, const Vector& mu0,
                                Xoshiro256pp& rng) {
  const Index p = mu0.size();
  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  switch (strategy) {
    case UpdateOrder::Lexicographic:
      break;
    case UpdateOrder::Prioritized:
      std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return std::abs(mu0(a)) > std::abs(mu0(b));
      });
      break;
    case UpdateOrder::Randomized:
      // Fisher-Yates driven by the library generator so fits stay
      // reproducible from the seed alone.
      for (Index k = p - 1; k > 0; --k) {
        const auto j = static_cast<Index>(
            rng.next() % static_cast<std::uint64_t>(k + 1));
        std::swap(order[static_cast<std::size_t>(k)],
                  order[static_cast<std::size_t>(j)]);
      }
      break;
  }
  return order;
}

double cavi_sweep(VariationalState& state, const RegressionData& data,
                  const PriorConfig& prior, const std::vector<Index>& order,
                  const Vector& mu0, const UpdateObserver& observer) {
  const double lambda = prior.lambda;
  const double log_prior_odds = std::log(prior.a0) - std::log(prior.b0);

  // Entropy snapshot at sweep start; the stopping statistic compares against
  // the values each coordinate held when the sweep began.
  Vector entropy_old(data.p);
  for (Index i = 0; i < data.p; ++i) entropy_old(i) = binary_entropy(state.gamma(i));

  // gm caches gamma .* mu so each cross term is a single dot product.
  Vector gm = state.gamma.cwiseProduct(state.mu);

  double delta = 0.0;
  for (const Index i : order) {
    const double cross = data.gram.row(i).dot(gm) - data.gram(i, i) * gm(i);

    detail::laplace_mu_sigma_update(state, data, mu0, i, cross, lambda, observer);

    const double logit_gamma =
        gamma_logit_terms(cross, data.gram(i, i), data.yx(i), state.mu(i),
                          state.sigma(i), lambda, log_prior_odds);
    state.gamma(i) = clamp_gamma(inv_logit(logit_gamma));
    if (observer) observer(state, i, UpdateKind::Gamma);

    gm(i) = state.gamma(i) * state.mu(i);
    delta = std::max(delta, std::abs(binary_entropy(state.gamma(i)) - entropy_old(i)));
  }
  return delta;
}

FitSummary cavi_fit(const RegressionData& data, const PriorConfig& prior,
                    const FitConfig& config, const UpdateObserver& observer) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::check_fit_inputs(data, prior, config, SlabFamily::Laplace);

  const Vector mu0 = ridge_init(data);
  Xoshiro256pp rng(config.seed);
  const std::vector<Index> order = update_order(config.order, mu0, rng);

  FitSummary summary;
  summary.order_used = order;
  summary.state = detail::make_initial_state(mu0, prior, config);

  if (config.track_elbo) {
    summary.elbo_trace.push_back(negative_elbo(summary.state, data, prior));
  }

  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    const double delta = cavi_sweep(summary.state, data, prior, order, mu0, observer);
    ++summary.sweeps;
    if (config.track_elbo) {
      summary.elbo_trace.push_back(negative_elbo(summary.state, data, prior));
    }
    if (delta <= config.epsilon) {
      summary.converged = true;
      break;
    }
  }

  summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summary;
}

double negative_elbo(const VariationalState& state, const RegressionData& data,
                     const PriorConfig& prior) {
  if (prior.slab != SlabFamily::Laplace) {
    throw InvalidInputError("negative_elbo: defined for the Laplace slab");
  }
  validate_prior(prior);
  validate_state(state);
  if (state.mu.size() != data.p) {
    throw InvalidInputError("negative_elbo: state length does not match design");
  }

  const double lambda = prior.lambda;
  const double w_bar = prior.prior_inclusion();
  const double log_w = std::log(w_bar);
  const double log_1mw = std::log1p(-w_bar);

  const Vector gm = state.gamma.cwiseProduct(state.mu);
  double acc = -data.yx.dot(gm) + 0.5 * gm.dot(data.gram * gm);

  for (Index i = 0; i < data.p; ++i) {
    const double d = data.gram(i, i);
    const double mu = state.mu(i);
    const double sigma = state.sigma(i);
    const double g = state.gamma(i);
    // Diagonal of the quadratic form enters through the marginal second
    // moment gamma * (mu^2 + sigma^2) rather than (gamma * mu)^2.
    acc += 0.5 * d * (g * (mu * mu + sigma * sigma) - g * g * mu * mu);
    acc += g * (-kLogSqrtPiOver2 - std::log(sigma * lambda) - 0.5 +
                lambda * folded_normal_mean(mu, sigma));
    acc += xlogy(g, g) - g * log_w + xlogy(1.0 - g, 1.0 - g) - (1.0 - g) * log_1mw;
  }
  return acc;
}

}  // namespace sparsevb
