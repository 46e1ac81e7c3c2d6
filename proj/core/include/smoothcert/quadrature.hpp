#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace smoothcert {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1]. Nodes are stored as the
// nonnegative abscissae; even indices carry the embedded Gauss-7 weights.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeights[8] = {
    0.0, 0.129484966168870, 0.0, 0.279705391489277,
    0.0, 0.381830050505119, 0.0, 0.417959183673469};

template <class F>
std::pair<double, double> gauss_kronrod_15(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_mid = f(mid);
  double k15 = kKronrodWeights[7] * f_mid;
  double g7 = kGaussWeights[7] * f_mid;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double fsum = f(mid + dx) + f(mid - dx);
    k15 += kKronrodWeights[i] * fsum;
    g7 += kGaussWeights[i] * fsum;
  }
  k15 *= half;
  g7 *= half;
  double err = 200.0 * std::fabs(k15 - g7);
  err *= std::sqrt(err);
  return {k15, err};
}

}  // namespace detail

// Adaptive quadrature over [a, b] with an explicit interval stack.
// Segments are accepted once their Kronrod error estimate drops below a
// length-proportional share of the absolute tolerance or the relative one.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol = 1e-12,
                           double rel_tol = 1e-12, int max_segments = 4000) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  const double total_length = std::fabs(b - a);
  std::vector<std::pair<double, double>> stack;
  stack.reserve(64);
  stack.emplace_back(a, b);
  int segments = 0;
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    const auto [value, err] = detail::gauss_kronrod_15(f, lo, hi);
    const double share = abs_tol * std::fabs(hi - lo) / total_length;
    if (err <= share || err <= rel_tol * std::fabs(value) ||
        std::fabs(hi - lo) < 1e-14 * total_length) {
      out.value += value;
      out.error += err;
      continue;
    }
    if (++segments > max_segments) {
      out.value += value;
      out.error += err;
      continue;
    }
    const double mid = 0.5 * (lo + hi);
    stack.emplace_back(lo, mid);
    stack.emplace_back(mid, hi);
  }
  out.converged = segments <= max_segments;
  return out;
}

}  // namespace smoothcert
