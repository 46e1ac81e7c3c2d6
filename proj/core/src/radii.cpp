#include "smoothcert/radii.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "smoothcert/normal.hpp"

namespace smoothcert {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
}

// Quantile extended to the closed unit interval.
double quantile_extended(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return std_normal_quantile(p);
}

}  // namespace

double clamp_proportion(double p) {
  return std::clamp(p, 1e-16, 1.0 - 1e-16);
}

CertifiedRadius radius_mono(double top_p, double sigma) {
  check_probability(top_p, "top_p");
  check_sigma(sigma);
  CertifiedRadius radius{RadiusKind::mono, sigma, std::nullopt, false};
  if (top_p <= 0.5) return radius;
  const double q = quantile_extended(top_p);
  radius.value = std::isinf(q) ? kRadiusCapSigmas * sigma : sigma * q;
  return radius;
}

CertifiedRadius radius_mult(double top_p, double runner_up_p, double sigma) {
  check_probability(top_p, "top_p");
  check_probability(runner_up_p, "runner_up_p");
  check_sigma(sigma);
  CertifiedRadius radius{RadiusKind::mult, sigma, std::nullopt, false};
  const double margin =
      0.5 * (quantile_extended(top_p) - quantile_extended(runner_up_p));
  if (std::isnan(margin) || margin <= 0.0) return radius;
  radius.value = std::isinf(margin) ? kRadiusCapSigmas * sigma : sigma * margin;
  return radius;
}

CertifiedRadius plugin_radius_mult(const ConfidenceBound& lower_top,
                                   const ConfidenceBound& upper_runner_up,
                                   double sigma) {
  if (lower_top.side != BoundSide::lower || upper_runner_up.side != BoundSide::upper) {
    throw std::invalid_argument(
        "plugin_radius_mult needs a lower bound for the top class and an upper bound "
        "for the runner-up");
  }
  return radius_mult(lower_top.value, upper_runner_up.value, sigma);
}

}  // namespace smoothcert
