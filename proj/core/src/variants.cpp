#include "sparsevb/variants.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Cholesky>

#include "cavi_internal.hpp"
#include "sparsevb/errors.hpp"
#include "sparsevb/objectives.hpp"
#include "sparsevb/special.hpp"

namespace sparsevb {

namespace {

class SweepTimer {
 public:
  SweepTimer() : t0_(std::chrono::steady_clock::now()) {}
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

void reject_elbo_trace(const FitConfig& config) {
  if (config.track_elbo) {
    throw InvalidInputError(
        "track_elbo requires a Laplace-slab engine; the evidence bound is not "
        "implemented for Gaussian slabs");
  }
}

std::string describe_gamma_diagonal(const Vector& gamma) {
  std::ostringstream out;
  const Index p = gamma.size();
  if (p <= 16) {
    out << "(";
    for (Index i = 0; i < p; ++i) {
      if (i > 0) out << ", ";
      out << gamma(i);
    }
    out << ")";
  } else {
    out << "min=" << gamma.minCoeff() << ", max=" << gamma.maxCoeff() << ", p=" << p;
  }
  return out.str();
}

}  // namespace

FitSummary qmf_fit(const RegressionData& data, const PriorConfig& prior,
                   const FitConfig& config, const UpdateObserver& observer) {
  const SweepTimer timer;
  detail::check_fit_inputs(data, prior, config, SlabFamily::Laplace);

  const Vector mu0 = ridge_init(data);
  Xoshiro256pp rng(config.seed);
  const std::vector<Index> order = update_order(config.order, mu0, rng);

  FitSummary summary;
  summary.order_used = order;
  summary.state = detail::make_initial_state(mu0, prior, config);
  for (Index i = 0; i < data.p; ++i) {
    summary.state.gamma(i) = summary.state.gamma(i) > 0.5 ? 1.0 : 0.0;
  }

  if (config.track_elbo) {
    summary.elbo_trace.push_back(negative_elbo(summary.state, data, prior));
  }

  const double lambda = prior.lambda;
  const double log_prior_odds = std::log(prior.a0) - std::log(prior.b0);

  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    VariationalState& state = summary.state;
    Vector gm = state.gamma.cwiseProduct(state.mu);
    int flips = 0;
    for (const Index i : order) {
      const double cross = data.gram.row(i).dot(gm) - data.gram(i, i) * gm(i);
      detail::laplace_mu_sigma_update(state, data, mu0, i, cross, lambda, observer);
      const double logit_gamma =
          gamma_logit_terms(cross, data.gram(i, i), data.yx(i), state.mu(i),
                            state.sigma(i), lambda, log_prior_odds);
      const double flipped = logit_gamma > 0.0 ? 1.0 : 0.0;
      if (flipped != state.gamma(i)) ++flips;
      state.gamma(i) = flipped;
      if (observer) observer(state, i, UpdateKind::Gamma);
      gm(i) = state.gamma(i) * state.mu(i);
    }
    ++summary.sweeps;
    if (config.track_elbo) {
      summary.elbo_trace.push_back(negative_elbo(summary.state, data, prior));
    }
    if (flips == 0) {
      summary.converged = true;
      break;
    }
  }

  summary.wall_time_s = timer.elapsed();
  return summary;
}

FitSummary gauss_componentwise_fit(const RegressionData& data, const PriorConfig& prior,
                                   const FitConfig& config,
                                   const UpdateObserver& observer) {
  const SweepTimer timer;
  detail::check_fit_inputs(data, prior, config, SlabFamily::Gaussian);
  reject_elbo_trace(config);

  const Vector mu0 = ridge_init(data);
  Xoshiro256pp rng(config.seed);
  const std::vector<Index> order = update_order(config.order, mu0, rng);

  FitSummary summary;
  summary.order_used = order;
  summary.state = detail::make_initial_state(mu0, prior, config);

  const double rho = prior.slab_sd;
  const double inv_rho2 = 1.0 / (rho * rho);
  const double log_rho = std::log(rho);
  const double log_prior_odds = std::log(prior.a0) - std::log(prior.b0);

  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    VariationalState& state = summary.state;
    Vector entropy_old(data.p);
    for (Index i = 0; i < data.p; ++i) entropy_old(i) = binary_entropy(state.gamma(i));
    Vector gm = state.gamma.cwiseProduct(state.mu);

    double delta = 0.0;
    for (const Index i : order) {
      const double d = data.gram(i, i);
      const double cross = data.gram.row(i).dot(gm) - d * gm(i);

      const double sigma = 1.0 / std::sqrt(d + inv_rho2);
      state.sigma(i) = sigma;
      if (observer) observer(state, i, UpdateKind::Sigma);

      const double mu = sigma * sigma * (data.yx(i) - cross);
      state.mu(i) = mu;
      if (observer) observer(state, i, UpdateKind::Mu);

      state.gamma(i) = inv_logit(log_prior_odds + std::log(sigma) +
                                 mu * mu / (2.0 * sigma * sigma) - log_rho);
      if (observer) observer(state, i, UpdateKind::Gamma);

      gm(i) = state.gamma(i) * state.mu(i);
      delta = std::max(delta,
                       std::abs(binary_entropy(state.gamma(i)) - entropy_old(i)));
    }
    ++summary.sweeps;
    if (delta <= config.epsilon) {
      summary.converged = true;
      break;
    }
  }

  summary.wall_time_s = timer.elapsed();
  return summary;
}

FitSummary gauss_batchwise_fit(const RegressionData& data, const PriorConfig& prior,
                               const FitConfig& config,
                               const UpdateObserver& observer) {
  const SweepTimer timer;
  detail::check_fit_inputs(data, prior, config, SlabFamily::Gaussian);
  reject_elbo_trace(config);
  if (prior.slab_sd != 1.0) {
    throw InvalidInputError(
        "gauss_batchwise_fit: the batch updates hard-code unit slab variance; "
        "slab_sd must be 1");
  }
  if (data.p < 2) {
    throw InvalidInputError("gauss_batchwise_fit: requires p >= 2");
  }

  FitSummary summary;
  summary.order_used.resize(static_cast<std::size_t>(data.p));
  std::iota(summary.order_used.begin(), summary.order_used.end(), Index{0});
  // The batch solve overwrites mu before anything reads it, so mu starts at
  // zero; no ridge initialization is needed.
  summary.state = detail::make_initial_state(Vector::Zero(data.p), prior, config);

  const double logit_inv_p = logit(1.0 / static_cast<double>(data.p));
  const double jitter =
      1e-10 * data.gram.trace() / static_cast<double>(data.p);

  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    VariationalState& state = summary.state;
    Vector entropy_old(data.p);
    for (Index i = 0; i < data.p; ++i) entropy_old(i) = binary_entropy(state.gamma(i));

    Matrix system = data.gram;
    system.diagonal() += state.gamma;
    Eigen::LLT<Matrix> llt(system);
    if (llt.info() != Eigen::Success) {
      system.diagonal().array() += jitter;
      llt.compute(system);
      if (llt.info() != Eigen::Success) {
        throw NumericError(
            "gauss_batchwise_fit: batch solve failed even with jitter; "
            "effective gamma diagonal " +
            describe_gamma_diagonal(state.gamma));
      }
    }
    state.mu = llt.solve(data.yx);
    if (!state.mu.allFinite()) {
      throw NumericError(
          "gauss_batchwise_fit: batch solve produced non-finite mu; effective "
          "gamma diagonal " +
          describe_gamma_diagonal(state.gamma));
    }
    if (observer) {
      for (Index i = 0; i < data.p; ++i) observer(state, i, UpdateKind::Mu);
    }

    double delta = 0.0;
    for (Index i = 0; i < data.p; ++i) {
      const double sigma = 1.0 / std::sqrt(data.gram(i, i) + state.gamma(i));
      state.sigma(i) = sigma;
      if (observer) observer(state, i, UpdateKind::Sigma);

      const double mu = state.mu(i);
      state.gamma(i) = inv_logit(logit_inv_p + std::log(sigma) +
                                 mu * mu / (2.0 * sigma * sigma));
      if (observer) observer(state, i, UpdateKind::Gamma);

      delta = std::max(delta,
                       std::abs(binary_entropy(state.gamma(i)) - entropy_old(i)));
    }
    ++summary.sweeps;
    if (delta <= config.epsilon) {
      summary.converged = true;
      break;
    }
  }

  summary.wall_time_s = timer.elapsed();
  return summary;
}

}  // namespace sparsevb
