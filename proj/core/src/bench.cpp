#include "sparsevb/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "sparsevb/data.hpp"
#include "sparsevb/errors.hpp"
#include "sparsevb/noise.hpp"
#include "sparsevb/state.hpp"
#include "sparsevb/variants.hpp"

namespace sparsevb {

namespace {

double sample_sd(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0));
}

int thread_count(int replicates) {
  if (const char* env = std::getenv("SPARSEVB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return std::min(v, replicates);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::min(hw > 0 ? static_cast<int>(hw) : 1, replicates);
}

FitSummary dispatch_fit(Engine engine, const RegressionData& data,
                        const PriorConfig& prior, const FitConfig& config) {
  switch (engine) {
    case Engine::Laplace:
      return cavi_fit(data, prior, config);
    case Engine::Qmf:
      return qmf_fit(data, prior, config);
    case Engine::Gauss:
    case Engine::GaussRescaled:
      return gauss_componentwise_fit(data, prior, config);
    case Engine::GaussBatch:
      return gauss_batchwise_fit(data, prior, config);
  }
  throw InvalidInputError("run_scenario: unknown engine");
}

ReplicateRecord run_replicate(const ScenarioSpec& spec, Engine engine,
                              const FitConfig& config, int k) {
  const std::uint64_t rep_seed = derive_stream(spec.seed, static_cast<std::uint64_t>(k));
  Xoshiro256pp data_rng(derive_stream(rep_seed, 0));

  const Matrix X = generate_design(spec, data_rng);
  const auto [theta0, support] = generate_signal(spec, data_rng);
  const Vector Z = generate_noise(spec.noise, data_rng, spec.n);
  const Vector Y = X * theta0 + Z;

  const auto t0 = std::chrono::steady_clock::now();

  RegressionData data = precompute(X, Y);
  if (!spec.known_variance) {
    const NoiseEstimate est = estimate_noise_sd(data, NoiseMethod::ridge_df());
    data = rescale(data, est);
  } else {
    const double sd = spec.noise.true_sd();
    if (sd > 0.0 && sd != 1.0) {
      data = rescale(data, NoiseEstimate{sd, NoiseMethod::known(sd), 0.0});
    }
  }

  PriorConfig prior;
  prior.a0 = 1.0;
  prior.b0 = static_cast<double>(spec.p);
  prior.lambda = spec.lambda.value_or(1.0);
  switch (engine) {
    case Engine::Laplace:
    case Engine::Qmf:
      prior.slab = SlabFamily::Laplace;
      break;
    case Engine::Gauss:
    case Engine::GaussBatch:
      prior.slab = SlabFamily::Gaussian;
      prior.slab_sd = 1.0;
      break;
    case Engine::GaussRescaled:
      prior.slab = SlabFamily::Gaussian;
      prior.slab_sd = theta0.norm();
      break;
  }

  FitConfig rep_config = config;
  rep_config.seed = derive_stream(rep_seed, 1);
  const FitSummary summary = dispatch_fit(engine, data, prior, rep_config);

  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const Metrics m = metrics(posterior_mean(summary.state), summary.state.gamma, theta0);
  ReplicateRecord rec;
  rec.l2 = m.l2;
  rec.fdr = m.fdr;
  rec.tpr = m.tpr;
  rec.runtime_s = runtime;
  rec.sweeps = summary.sweeps;
  rec.converged = summary.converged;
  return rec;
}

}  // namespace

double NoiseSpec::true_sd() const {
  switch (kind) {
    case Kind::Gaussian:
      return param;
    case Kind::Laplace:
      return param * std::sqrt(2.0);
    case Kind::Uniform:
      return param / std::sqrt(3.0);
    case Kind::StudentT3:
      return std::sqrt(3.0);
  }
  return 1.0;
}

void validate_scenario(const ScenarioSpec& spec) {
  if (spec.n < 1 || spec.p < 1) {
    throw InvalidInputError("scenario: n and p must be positive");
  }
  if (spec.s < 0 || spec.s > spec.p) {
    throw InvalidInputError("scenario: s must lie in [0, p]");
  }
  if (spec.replicates < 1) {
    throw InvalidInputError("scenario: replicates must be positive");
  }
  switch (spec.design.kind) {
    case DesignSpec::Kind::Identity:
      if (spec.n != spec.p) {
        throw InvalidInputError("scenario: Identity design requires n = p");
      }
      break;
    case DesignSpec::Kind::IidGaussian:
      if (!(spec.design.tau > 0.0)) {
        throw InvalidInputError("scenario: IidGaussian tau must be positive");
      }
      break;
    case DesignSpec::Kind::Equicorrelated:
      if (!(spec.design.rho >= 0.0 && spec.design.rho < 1.0)) {
        throw InvalidInputError("scenario: Equicorrelated rho must lie in [0, 1)");
      }
      break;
  }
  if (spec.signal.kind == SignalSpec::Kind::Uniform &&
      !(spec.signal.lo <= spec.signal.hi)) {
    throw InvalidInputError("scenario: Uniform signal needs lo <= hi");
  }
  switch (spec.noise.kind) {
    case NoiseSpec::Kind::Gaussian:
      if (spec.noise.param < 0.0) {
        throw InvalidInputError("scenario: Gaussian noise sd must be >= 0");
      }
      break;
    case NoiseSpec::Kind::Laplace:
      if (!(spec.noise.param > 0.0)) {
        throw InvalidInputError("scenario: Laplace noise scale must be positive");
      }
      break;
    case NoiseSpec::Kind::Uniform:
      if (!(spec.noise.param > 0.0)) {
        throw InvalidInputError("scenario: Uniform noise half-width must be positive");
      }
      break;
    case NoiseSpec::Kind::StudentT3:
      break;
  }
  if (spec.lambda && !(*spec.lambda > 0.0)) {
    throw InvalidInputError("scenario: lambda must be positive");
  }
}

Matrix generate_design(const ScenarioSpec& spec, Xoshiro256pp& rng) {
  switch (spec.design.kind) {
    case DesignSpec::Kind::Identity:
      if (spec.n != spec.p) {
        throw InvalidInputError("generate_design: Identity requires n = p");
      }
      return Matrix::Identity(spec.n, spec.p);
    case DesignSpec::Kind::IidGaussian: {
      Matrix X(spec.n, spec.p);
      for (Index i = 0; i < spec.n; ++i) {
        for (Index j = 0; j < spec.p; ++j) {
          X(i, j) = spec.design.tau * rng.normal();
        }
      }
      return X;
    }
    case DesignSpec::Kind::Equicorrelated: {
      const double a = std::sqrt(spec.design.rho);
      const double b = std::sqrt(1.0 - spec.design.rho);
      Matrix X(spec.n, spec.p);
      for (Index i = 0; i < spec.n; ++i) {
        const double g = rng.normal();
        for (Index j = 0; j < spec.p; ++j) {
          X(i, j) = a * g + b * rng.normal();
        }
      }
      return X;
    }
  }
  throw InvalidInputError("generate_design: unknown design kind");
}

std::pair<Vector, std::vector<Index>> generate_signal(const ScenarioSpec& spec,
                                                      Xoshiro256pp& rng) {
  if (spec.s > spec.p) {
    throw InvalidInputError("generate_signal: s exceeds p");
  }
  std::vector<Index> support;
  support.reserve(static_cast<std::size_t>(spec.s));
  switch (spec.placement) {
    case Placement::Begin:
      for (Index i = 0; i < spec.s; ++i) support.push_back(i);
      break;
    case Placement::Middle: {
      const Index start = (spec.p - spec.s) / 2;
      for (Index i = 0; i < spec.s; ++i) support.push_back(start + i);
      break;
    }
    case Placement::End:
      for (Index i = spec.p - spec.s; i < spec.p; ++i) support.push_back(i);
      break;
    case Placement::Random: {
      // Partial Fisher-Yates: the first s entries are a uniform draw of s
      // distinct indices.
      std::vector<Index> pool(static_cast<std::size_t>(spec.p));
      std::iota(pool.begin(), pool.end(), Index{0});
      for (Index k = 0; k < spec.s; ++k) {
        const Index j =
            k + static_cast<Index>(rng.next() %
                                   static_cast<std::uint64_t>(spec.p - k));
        std::swap(pool[static_cast<std::size_t>(k)],
                  pool[static_cast<std::size_t>(j)]);
      }
      support.assign(pool.begin(), pool.begin() + spec.s);
      std::sort(support.begin(), support.end());
      break;
    }
  }

  Vector theta0 = Vector::Zero(spec.p);
  for (const Index i : support) {
    theta0(i) = spec.signal.kind == SignalSpec::Kind::Const
                    ? spec.signal.amp
                    : rng.uniform(spec.signal.lo, spec.signal.hi);
  }
  return {std::move(theta0), std::move(support)};
}

Vector generate_noise(const NoiseSpec& noise, Xoshiro256pp& rng, Index n) {
  Vector z(n);
  switch (noise.kind) {
    case NoiseSpec::Kind::Gaussian:
      for (Index i = 0; i < n; ++i) z(i) = noise.param * rng.normal();
      break;
    case NoiseSpec::Kind::Laplace:
      for (Index i = 0; i < n; ++i) z(i) = rng.laplace(noise.param);
      break;
    case NoiseSpec::Kind::Uniform:
      for (Index i = 0; i < n; ++i) z(i) = rng.uniform(-noise.param, noise.param);
      break;
    case NoiseSpec::Kind::StudentT3:
      for (Index i = 0; i < n; ++i) z(i) = rng.student_t3();
      break;
  }
  return z;
}

Metrics metrics(const Vector& estimate, const Vector& gamma, const Vector& theta0) {
  const Index p = theta0.size();
  if (estimate.size() != p || gamma.size() != p) {
    throw InvalidInputError("metrics: estimate, gamma, theta0 must have equal lengths");
  }

  Metrics m;
  m.l2 = (estimate - theta0).norm();

  int selected = 0, true_pos = 0, false_pos = 0, signal = 0;
  for (Index i = 0; i < p; ++i) {
    const bool sel = gamma(i) > 0.5;
    const bool sig = theta0(i) != 0.0;
    selected += sel;
    signal += sig;
    true_pos += sel && sig;
    false_pos += sel && !sig;
  }
  m.fdr = static_cast<double>(false_pos) / std::max(selected, 1);
  m.tpr = static_cast<double>(true_pos) / std::max(signal, 1);
  return m;
}

MetricsReport run_scenario(const ScenarioSpec& spec, Engine engine,
                           const FitConfig& config) {
  validate_scenario(spec);

  const int r = spec.replicates;
  std::vector<ReplicateRecord> records(static_cast<std::size_t>(r));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(r));

  const int threads = thread_count(r);
  if (threads <= 1) {
    for (int k = 0; k < r; ++k) {
      try {
        records[static_cast<std::size_t>(k)] = run_replicate(spec, engine, config, k);
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    }
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      while (true) {
        const int k = next.fetch_add(1);
        if (k >= r) return;
        try {
          records[static_cast<std::size_t>(k)] = run_replicate(spec, engine, config, k);
        } catch (...) {
          errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (int k = 0; k < r; ++k) {
    if (!errors[static_cast<std::size_t>(k)]) continue;
    const std::string prefix = "replicate " + std::to_string(k) + ": ";
    try {
      std::rethrow_exception(errors[static_cast<std::size_t>(k)]);
    } catch (const InvalidInputError& e) {
      throw InvalidInputError(prefix + e.what());
    } catch (const NumericError& e) {
      throw NumericError(prefix + e.what());
    } catch (const std::exception& e) {
      throw NumericError(prefix + e.what());
    }
  }

  MetricsReport report;
  report.records = std::move(records);
  report.replicates_completed = r;

  std::vector<double> l2(static_cast<std::size_t>(r)), fdr(static_cast<std::size_t>(r)),
      tpr(static_cast<std::size_t>(r)), rt(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) {
    const ReplicateRecord& rec = report.records[static_cast<std::size_t>(k)];
    l2[static_cast<std::size_t>(k)] = rec.l2;
    fdr[static_cast<std::size_t>(k)] = rec.fdr;
    tpr[static_cast<std::size_t>(k)] = rec.tpr;
    rt[static_cast<std::size_t>(k)] = rec.runtime_s;
  }
  const double rd = static_cast<double>(r);
  report.l2_mean = std::accumulate(l2.begin(), l2.end(), 0.0) / rd;
  report.fdr_mean = std::accumulate(fdr.begin(), fdr.end(), 0.0) / rd;
  report.tpr_mean = std::accumulate(tpr.begin(), tpr.end(), 0.0) / rd;
  report.runtime_mean_s = std::accumulate(rt.begin(), rt.end(), 0.0) / rd;
  report.l2_sd = sample_sd(l2, report.l2_mean);
  report.fdr_sd = sample_sd(fdr, report.fdr_mean);
  report.tpr_sd = sample_sd(tpr, report.tpr_mean);
  report.runtime_sd_s = sample_sd(rt, report.runtime_mean_s);
  return report;
}

}  // namespace sparsevb
