#pragma once

#include <cmath>
#include <limits>

namespace smoothcert {

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Brent's bracketed root finder: inverse quadratic interpolation with
// secant and bisection safeguards. Requires f(a) and f(b) of opposite sign.
// Stops when the bracket collapses to a few ulp of the root or the residual
// falls below residual_tol.
template <class F>
RootResult brent_root(F&& f, double a, double b, double fa, double fb,
                      double residual_tol = 1e-14, int max_iterations = 200) {
  if (fa == 0.0) return {a, 0.0, 0, true};
  if (fb == 0.0) return {b, 0.0, 0, true};
  double c = b, fc = fb;
  double d = b - a, e = d;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int iter = 1; iter <= max_iterations; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * eps * std::fabs(b);
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || std::fabs(fb) <= residual_tol) {
      return {b, fb, iter, true};
    }
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
      const double min2 = std::fabs(e * q);
      if (2.0 * p < std::fmin(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (std::fabs(d) > tol1) {
      b += d;
    } else {
      b += xm > 0.0 ? tol1 : -tol1;
    }
    fb = f(b);
  }
  return {b, fb, max_iterations, false};
}

}  // namespace smoothcert
