#pragma once

#include <functional>

namespace sparsevb {

// Search interval and termination settings for the one-dimensional minimizer.
struct BracketSpec {
  double lo = 0.0;
  double hi = 1.0;
  double tol = 1e-8;  // absolute tolerance on the argument
  int max_eval = 200;
};

struct ScalarMinResult {
  double x_star = 0.0;
  double f_star = 0.0;
  int evals = 0;
};

// Derivative-free minimization on [lo, hi]: golden-section search combined
// with successive parabolic interpolation. Both endpoints are evaluated, so
// the result never exceeds min(f(lo), f(hi)). Terminates once the bracketing
// interval is at most tol wide or max_eval evaluations were spent.
// Throws NumericError, naming the evaluation point, if f returns a
// non-finite value. Deterministic: identical inputs give identical outputs.
ScalarMinResult minimize_scalar(const std::function<double(double)>& f,
                                const BracketSpec& bracket);

}  // namespace sparsevb
