#include "sparsevb/brent.hpp"

#include <cmath>
#include <string>

#include "sparsevb/errors.hpp"

namespace sparsevb {

namespace {

double sign_with(double magnitude, double direction) {
  return direction >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

}  // namespace

ScalarMinResult minimize_scalar(const std::function<double(double)>& f,
                                const BracketSpec& bracket) {
  if (!(bracket.lo < bracket.hi)) {
    throw InvalidInputError("minimize_scalar: bracket requires lo < hi");
  }
  if (!(bracket.tol > 0.0)) {
    throw InvalidInputError("minimize_scalar: tol must be positive");
  }
  if (bracket.max_eval < 3) {
    throw InvalidInputError("minimize_scalar: max_eval must be at least 3");
  }

  int evals = 0;
  const auto eval = [&](double point) {
    const double value = f(point);
    ++evals;
    if (!std::isfinite(value)) {
      throw NumericError("minimize_scalar: objective returned non-finite value at x = " +
                         std::to_string(point));
    }
    return value;
  };

  const double f_lo = eval(bracket.lo);
  const double f_hi = eval(bracket.hi);

  // Golden section fraction 2 - (1 + sqrt(5)) / 2.
  const double cgold = 0.38196601125010515;
  const double tol1 = 0.25 * bracket.tol;  // minimum step size
  const double tol2 = 2.0 * tol1;

  double a = bracket.lo;
  double b = bracket.hi;
  double x = a + cgold * (b - a);
  double w = x;
  double v = x;
  double fx = eval(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;

  while (evals < bracket.max_eval && (b - a) > bracket.tol) {
    const double m = 0.5 * (a + b);
    bool take_golden = true;
    if (std::abs(e) > tol1) {
      // Parabola through (v, fv), (w, fw), (x, fx).
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) {
        p = -p;
      }
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        const double u_try = x + d;
        if (u_try - a < tol2 || b - u_try < tol2) {
          d = sign_with(tol1, m - x);
        }
        take_golden = false;
      }
    }
    if (take_golden) {
      e = (x < m) ? b - x : a - x;
      d = cgold * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + sign_with(tol1, d);
    const double fu = eval(u);
    if (fu <= fx) {
      if (u < x) {
        b = x;
      } else {
        a = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }

  // The endpoints were evaluated up front; returning the best of the three
  // candidates guarantees f_star <= min(f(lo), f(hi)).
  ScalarMinResult result{x, fx, evals};
  if (f_lo < result.f_star) {
    result.x_star = bracket.lo;
    result.f_star = f_lo;
  }
  if (f_hi < result.f_star) {
    result.x_star = bracket.hi;
    result.f_star = f_hi;
  }
  result.evals = evals;
  return result;
}

}  // namespace sparsevb
