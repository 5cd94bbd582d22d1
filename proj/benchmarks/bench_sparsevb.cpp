// Micro-benchmarks for the hot paths: a full CAVI fit at the bench's usual
// problem size, the ridge initializer, one evidence-bound evaluation, and
// the exhaustive sparse singular value scan.

#include <benchmark/benchmark.h>

#include "sparsevb/cavi.hpp"
#include "sparsevb/data.hpp"
#include "sparsevb/diagnostics.hpp"
#include "sparsevb/rng.hpp"
#include "sparsevb/state.hpp"
#include "sparsevb/types.hpp"

namespace {

using namespace sparsevb;

Matrix random_matrix(Index n, Index p, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  Matrix X(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) X(i, j) = rng.normal();
  }
  return X;
}

RegressionData sparse_problem(Index n, Index p, Index s, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  const Matrix X = random_matrix(n, p, seed + 1);
  Vector theta = Vector::Zero(p);
  for (Index j = 0; j < s; ++j) theta[j] = 10.0;
  Vector noise(n);
  for (Index i = 0; i < n; ++i) noise[i] = rng.normal();
  return precompute(X, X * theta + noise);
}

void BM_CaviFit(benchmark::State& state) {
  const RegressionData data = sparse_problem(100, 200, 20, 42);
  PriorConfig prior;
  prior.b0 = 200.0;
  const FitConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cavi_fit(data, prior, config));
  }
}
BENCHMARK(BM_CaviFit)->Unit(benchmark::kMillisecond);

void BM_RidgeInit(benchmark::State& state) {
  const Index p = state.range(0);
  const RegressionData data = sparse_problem(100, p, 3, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ridge_init(data));
  }
}
BENCHMARK(BM_RidgeInit)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_NegativeElbo(benchmark::State& state) {
  const Index p = state.range(0);
  const RegressionData data = sparse_problem(100, p, 10, 11);
  PriorConfig prior;
  prior.b0 = static_cast<double>(p);
  Xoshiro256pp rng(3);
  VariationalState st;
  st.mu = Vector(p);
  st.sigma = Vector(p);
  st.gamma = Vector(p);
  for (Index j = 0; j < p; ++j) {
    st.mu[j] = rng.normal();
    st.sigma[j] = 0.5 + rng.uniform01();
    st.gamma[j] = 0.1 + 0.8 * rng.uniform01();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(negative_elbo(st, data, prior));
  }
}
BENCHMARK(BM_NegativeElbo)->Arg(200)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_SparseSingularValue(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  const Matrix X = random_matrix(30, 16, 5);
  const RegressionData data = precompute(X, Vector::Zero(30));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sparse_singular_value(data, s));
  }
}
BENCHMARK(BM_SparseSingularValue)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
