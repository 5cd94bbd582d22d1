#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sparsevb/cavi.hpp"
#include "sparsevb/data.hpp"
#include "sparsevb/errors.hpp"
#include "sparsevb/rng.hpp"
#include "sparsevb/special.hpp"
#include "sparsevb/variants.hpp"

using namespace sparsevb;

namespace {

RegressionData random_regression(Index n, Index p, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  Matrix X(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) X(i, j) = rng.normal();
  }
  Vector Y(n);
  for (Index i = 0; i < n; ++i) Y[i] = rng.normal();
  return precompute(X, Y);
}

}  // namespace

TEST_CASE("qmf_fit selects the strong coordinate on the identity design") {
  Matrix X = Matrix::Identity(2, 2);
  Vector Y(2);
  Y << 10.0, 0.0;
  const RegressionData data = precompute(X, Y);
  PriorConfig prior;
  const FitSummary fit = qmf_fit(data, prior);
  CHECK(fit.converged);
  CHECK(fit.state.gamma[0] == 1.0);
  CHECK(fit.state.gamma[1] == 0.0);
  // The Laplace slab soft-thresholds the coordinate mean: with d = 1 the
  // minimizer of the mu objective sits at yx - lambda = 9.
  CHECK(fit.state.mu[0] == doctest::Approx(9.0).epsilon(1e-3));
}

TEST_CASE("qmf_fit excludes everything on a zero response") {
  Matrix X = Matrix::Identity(3, 3);
  Vector Y = Vector::Zero(3);
  const RegressionData data = precompute(X, Y);
  PriorConfig prior;
  const FitSummary fit = qmf_fit(data, prior);
  CHECK(fit.converged);
  for (Index i = 0; i < 3; ++i) {
    CHECK(fit.state.gamma[i] == 0.0);
  }
}

TEST_CASE("qmf_fit keeps gamma exactly on the endpoints") {
  const RegressionData data = random_regression(20, 8, 314);
  PriorConfig prior;
  prior.b0 = 8.0;
  const FitSummary fit = qmf_fit(data, prior);
  for (Index i = 0; i < 8; ++i) {
    CHECK((fit.state.gamma[i] == 0.0 || fit.state.gamma[i] == 1.0));
  }
}

TEST_CASE("qmf_fit thresholds the initial support at one half") {
  const RegressionData data = random_regression(10, 4, 55);
  PriorConfig prior;

  for (double init : {0.9, 0.1}) {
    FitConfig config;
    config.init_gamma = init;
    bool captured = false;
    Vector gamma_at_start;
    const UpdateObserver observer = [&](const VariationalState& state, Index,
                                        UpdateKind) {
      if (!captured) {
        gamma_at_start = state.gamma;
        captured = true;
      }
    };
    qmf_fit(data, prior, config, observer);
    REQUIRE(captured);
    const double expected = init > 0.5 ? 1.0 : 0.0;
    // All but possibly the first updated coordinate still hold the initial
    // support; the first gamma update has not run yet at the first callback.
    int matching = 0;
    for (Index i = 0; i < 4; ++i) {
      if (gamma_at_start[i] == expected) ++matching;
    }
    CHECK(matching == 4);
  }
}

TEST_CASE("qmf_fit per-update and per-sweep evidence monotonicity") {
  const RegressionData data = random_regression(12, 5, 808);
  PriorConfig prior;
  prior.b0 = 5.0;
  FitConfig config;
  config.track_elbo = true;
  config.max_sweeps = 20;

  double prev = std::numeric_limits<double>::infinity();
  bool first = true;
  const UpdateObserver observer = [&](const VariationalState& state, Index, UpdateKind) {
    const double cur = negative_elbo(state, data, prior);
    if (!first) {
      CHECK(cur <= prev + 1e-8 * (1.0 + std::abs(prev)));
    }
    first = false;
    prev = cur;
  };
  const FitSummary fit = qmf_fit(data, prior, config, observer);
  REQUIRE(fit.elbo_trace.size() == static_cast<std::size_t>(fit.sweeps) + 1);
  for (std::size_t k = 1; k < fit.elbo_trace.size(); ++k) {
    CHECK(fit.elbo_trace[k] <=
          fit.elbo_trace[k - 1] + 1e-8 * (1.0 + std::abs(fit.elbo_trace[k - 1])));
  }
}

TEST_CASE("qmf_fit is bitwise deterministic") {
  const RegressionData data = random_regression(15, 6, 99);
  PriorConfig prior;
  prior.b0 = 6.0;
  FitConfig config;
  config.order = UpdateOrder::Randomized;
  config.seed = 4;
  const FitSummary a = qmf_fit(data, prior, config);
  const FitSummary b = qmf_fit(data, prior, config);
  CHECK(a.sweeps == b.sweeps);
  for (Index i = 0; i < 6; ++i) {
    CHECK(a.state.mu[i] == b.state.mu[i]);
    CHECK(a.state.sigma[i] == b.state.sigma[i]);
    CHECK(a.state.gamma[i] == b.state.gamma[i]);
  }
}

TEST_CASE("gauss_componentwise_fit closed-form sigma on diagonal designs") {
  SUBCASE("identity design, unit slab") {
    Matrix X = Matrix::Identity(2, 2);
    Vector Y(2);
    Y << 3.0, 1.0;
    const RegressionData data = precompute(X, Y);
    PriorConfig prior;
    prior.slab = SlabFamily::Gaussian;
    prior.slab_sd = 1.0;
    const FitSummary fit = gauss_componentwise_fit(data, prior);
    for (Index i = 0; i < 2; ++i) {
      CHECK(fit.state.sigma[i] ==
            doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    }
    CHECK(fit.order_used == std::vector<Index>{0, 1});
  }
  SUBCASE("column norm sqrt(3), unit slab") {
    Matrix X(1, 1);
    X << std::sqrt(3.0);
    Vector Y(1);
    Y << 1.0;
    const RegressionData data = precompute(X, Y);
    PriorConfig prior;
    prior.slab = SlabFamily::Gaussian;
    const FitSummary fit = gauss_componentwise_fit(data, prior);
    CHECK(fit.state.sigma[0] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("identity design, slab sd 2") {
    Matrix X = Matrix::Identity(2, 2);
    Vector Y(2);
    Y << 1.0, -1.0;
    const RegressionData data = precompute(X, Y);
    PriorConfig prior;
    prior.slab = SlabFamily::Gaussian;
    prior.slab_sd = 2.0;
    const FitSummary fit = gauss_componentwise_fit(data, prior);
    for (Index i = 0; i < 2; ++i) {
      CHECK(fit.state.sigma[i] ==
            doctest::Approx(1.0 / std::sqrt(1.25)).epsilon(1e-14));
    }
  }
}

TEST_CASE("gauss_componentwise_fit one sweep replays the update box verbatim") {
  const RegressionData data = random_regression(9, 4, 2021);
  PriorConfig prior;
  prior.slab = SlabFamily::Gaussian;
  prior.slab_sd = 1.5;
  prior.a0 = 1.0;
  prior.b0 = 4.0;
  FitConfig config = gauss_componentwise_defaults();
  config.max_sweeps = 1;
  const FitSummary fit = gauss_componentwise_fit(data, prior, config);
  REQUIRE(fit.sweeps == 1);

  // Straight-line replay, lexicographic order.
  const Vector mu0 = ridge_init(data);
  VariationalState s;
  s.mu = mu0;
  s.sigma = Vector::Ones(4);
  s.gamma = Vector::Constant(4, prior.prior_inclusion());
  Vector gm = s.gamma.cwiseProduct(s.mu);
  const double rho = prior.slab_sd;
  const double log_prior_odds = std::log(prior.a0) - std::log(prior.b0);
  for (Index i = 0; i < 4; ++i) {
    const double d = data.gram(i, i);
    const double cross = data.gram.row(i).dot(gm) - d * gm(i);
    const double sigma = 1.0 / std::sqrt(d + 1.0 / (rho * rho));
    const double mu = sigma * sigma * (data.yx[i] - cross);
    s.sigma[i] = sigma;
    s.mu[i] = mu;
    s.gamma[i] = inv_logit(log_prior_odds + std::log(sigma) +
                           mu * mu / (2.0 * sigma * sigma) - std::log(rho));
    gm(i) = s.gamma[i] * s.mu[i];
  }
  for (Index i = 0; i < 4; ++i) {
    CHECK(std::abs(fit.state.mu[i] - s.mu[i]) < 1e-12);
    CHECK(std::abs(fit.state.sigma[i] - s.sigma[i]) < 1e-12);
    CHECK(std::abs(fit.state.gamma[i] - s.gamma[i]) < 1e-12);
  }
}

TEST_CASE("gauss_componentwise_fit rejects track_elbo and Laplace priors") {
  const RegressionData data = random_regression(5, 2, 3);
  PriorConfig prior;
  prior.slab = SlabFamily::Gaussian;
  FitConfig config = gauss_componentwise_defaults();
  config.track_elbo = true;
  CHECK_THROWS_AS(gauss_componentwise_fit(data, prior, config), InvalidInputError);

  PriorConfig laplace;
  CHECK_THROWS_AS(gauss_componentwise_fit(data, laplace), InvalidInputError);
}

TEST_CASE("gauss_batchwise_fit solves the penalized system on the first sweep") {
  // Orthogonal columns with norms 1 and 2; initial gamma fixed to one half.
  Matrix X(2, 2);
  X << 1.0, 0.0, 0.0, 2.0;
  Vector Y(2);
  Y << 3.0, 5.0;
  const RegressionData data = precompute(X, Y);
  PriorConfig prior;
  prior.slab = SlabFamily::Gaussian;
  prior.slab_sd = 1.0;
  FitConfig config;
  config.init_gamma = 0.5;
  config.max_sweeps = 1;
  const FitSummary fit = gauss_batchwise_fit(data, prior, config);
  // gram = diag(1, 4), yx = (3, 10); mu = ((1 + g)^{-1} yx_0, (4 + g)^{-1} yx_1).
  CHECK(fit.state.mu[0] == doctest::Approx(3.0 / 1.5).epsilon(1e-12));
  CHECK(fit.state.mu[1] == doctest::Approx(10.0 / 4.5).epsilon(1e-12));
  // sigma uses the pre-update gamma.
  CHECK(fit.state.sigma[0] == doctest::Approx(1.0 / std::sqrt(1.5)).epsilon(1e-12));
  CHECK(fit.state.sigma[1] == doctest::Approx(1.0 / std::sqrt(4.5)).epsilon(1e-12));
  // gamma update: logit(1/p) = logit(1/2) = 0.
  const double expected_g0 =
      inv_logit(std::log(fit.state.sigma[0]) +
                fit.state.mu[0] * fit.state.mu[0] /
                    (2.0 * fit.state.sigma[0] * fit.state.sigma[0]));
  CHECK(fit.state.gamma[0] == doctest::Approx(expected_g0).epsilon(1e-12));
}

TEST_CASE("gauss_batchwise_fit identity-design fixed point") {
  Matrix X = Matrix::Identity(4, 4);
  Vector Y(4);
  Y << 6.0, 0.1, -5.0, 0.0;
  const RegressionData data = precompute(X, Y);
  PriorConfig prior;
  prior.slab = SlabFamily::Gaussian;
  FitConfig config;
  config.epsilon = 1e-10;  // tight stop so mu and gamma agree at the fixed point
  const FitSummary fit = gauss_batchwise_fit(data, prior, config);
  CHECK(fit.converged);
  // mu_i = Y_i / (1 + gamma_i) at the fixed point.
  for (Index i = 0; i < 4; ++i) {
    CHECK(fit.state.mu[i] ==
          doctest::Approx(Y[i] / (1.0 + fit.state.gamma[i])).epsilon(1e-6));
  }
  CHECK(fit.state.gamma[0] > 0.99);
  CHECK(fit.state.gamma[2] > 0.99);
  CHECK(fit.state.gamma[1] < 0.3);
}

TEST_CASE("gauss_batchwise_fit ignores the order strategy") {
  const RegressionData data = random_regression(8, 5, 402);
  PriorConfig prior;
  prior.slab = SlabFamily::Gaussian;
  FitConfig config;
  config.order = UpdateOrder::Randomized;
  config.seed = 12345;
  const FitSummary fit = gauss_batchwise_fit(data, prior, config);
  CHECK(fit.order_used == std::vector<Index>{0, 1, 2, 3, 4});

  FitConfig other = config;
  other.order = UpdateOrder::Prioritized;
  const FitSummary fit2 = gauss_batchwise_fit(data, prior, other);
  for (Index i = 0; i < 5; ++i) {
    CHECK(fit.state.mu[i] == fit2.state.mu[i]);
    CHECK(fit.state.gamma[i] == fit2.state.gamma[i]);
  }
}

TEST_CASE("gauss_batchwise_fit input contracts") {
  const RegressionData data = random_regression(6, 3, 5);
  PriorConfig prior;
  prior.slab = SlabFamily::Gaussian;

  PriorConfig wide = prior;
  wide.slab_sd = 2.0;
  CHECK_THROWS_AS(gauss_batchwise_fit(data, wide), InvalidInputError);

  const RegressionData single = random_regression(6, 1, 6);
  CHECK_THROWS_AS(gauss_batchwise_fit(single, prior), InvalidInputError);

  FitConfig track;
  track.track_elbo = true;
  CHECK_THROWS_AS(gauss_batchwise_fit(data, prior, track), InvalidInputError);

  PriorConfig laplace;
  CHECK_THROWS_AS(gauss_batchwise_fit(data, laplace), InvalidInputError);
}

TEST_CASE("gauss_batchwise_fit reports an unsolvable penalized system") {
  // An indefinite hand-built gram with zero trace defeats both the direct
  // solve and the (zero) jitter retry.
  RegressionData data;
  data.n = 2;
  data.p = 2;
  data.X = Matrix::Zero(2, 2);
  data.Y = Vector::Zero(2);
  data.gram = Matrix(2, 2);
  data.gram << 0.0, 1.0, 1.0, 0.0;
  data.yx = Vector(2);
  data.yx << 1.0, 1.0;
  data.col_norms = Vector::Zero(2);
  data.x_norm = 0.0;
  PriorConfig prior;
  prior.slab = SlabFamily::Gaussian;

  try {
    gauss_batchwise_fit(data, prior);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    const std::string what = e.what();
    CHECK(what.find("gamma diagonal") != std::string::npos);
    CHECK(what.find("0.5") != std::string::npos);
  }
}
