#include "smoothcert/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smoothcert {

namespace {

void check_observation(const BinomialObservation& obs) {
  if (obs.trials <= 0) {
    throw std::invalid_argument("binomial observation needs trials >= 1");
  }
  if (obs.successes < 0 || obs.successes > obs.trials) {
    throw std::invalid_argument("binomial observation needs 0 <= successes <= trials");
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("risk level alpha must lie strictly in (0, 1)");
  }
}

double log_choose(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

double binomial_upper_tail(std::int64_t k, std::int64_t n, double p) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;

  // Sum outward from the largest term of the tail so the recurrence never
  // leaves the representable range; naive products underflow long before
  // n = 1e4 with extreme k.
  const double q = 1.0 - p;
  const std::int64_t mode = static_cast<std::int64_t>(std::floor((n + 1) * p));
  const std::int64_t peak = std::clamp(mode, k, n);
  const double log_peak = log_choose(n, peak) +
                          peak * std::log(p) +
                          (n - peak) * std::log1p(-p);
  if (log_peak < -744.0) {
    // Every term of the tail underflows double precision.
    return 0.0;
  }
  double sum = 1.0;
  double term = 1.0;
  for (std::int64_t j = peak; j < n; ++j) {
    term *= (static_cast<double>(n - j) / static_cast<double>(j + 1)) * (p / q);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  term = 1.0;
  for (std::int64_t j = peak; j > k; --j) {
    term *= (static_cast<double>(j) * q) / (static_cast<double>(n - j + 1) * p);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return std::min(1.0, std::exp(log_peak) * sum);
}

double binomial_lower_tail(std::int64_t k, std::int64_t n, double p) {
  // P[X <= k | p] = P[n - X >= n - k | 1 - p].
  return binomial_upper_tail(n - k, n, 1.0 - p);
}

ConfidenceBound clopper_pearson_lower(const BinomialObservation& obs, double alpha) {
  check_observation(obs);
  check_alpha(alpha);
  const std::int64_t k = obs.successes;
  const std::int64_t n = obs.trials;
  if (k == 0) {
    return {0.0, BoundSide::lower, alpha, BoundMethod::clopper_pearson};
  }
  if (k == n) {
    // P[X = n | p] = p^n = alpha.
    return {std::exp(std::log(alpha) / static_cast<double>(n)), BoundSide::lower,
            alpha, BoundMethod::clopper_pearson};
  }
  // P[X >= k | p] grows from 0 to 1 in p; the bound is the unique root at alpha.
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (binomial_upper_tail(k, n, mid) < alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), BoundSide::lower, alpha, BoundMethod::clopper_pearson};
}

ConfidenceBound clopper_pearson_upper(const BinomialObservation& obs, double alpha) {
  check_observation(obs);
  check_alpha(alpha);
  const std::int64_t k = obs.successes;
  const std::int64_t n = obs.trials;
  if (k == n) {
    return {1.0, BoundSide::upper, alpha, BoundMethod::clopper_pearson};
  }
  if (k == 0) {
    // P[X = 0 | p] = (1-p)^n = alpha.
    return {-std::expm1(std::log(alpha) / static_cast<double>(n)), BoundSide::upper,
            alpha, BoundMethod::clopper_pearson};
  }
  // P[X <= k | p] falls from 1 to 0 in p.
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (binomial_lower_tail(k, n, mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), BoundSide::upper, alpha, BoundMethod::clopper_pearson};
}

ConfidenceBound hoeffding_bound(double mean, std::int64_t trials, double alpha,
                                BoundSide side) {
  check_alpha(alpha);
  if (trials <= 0) throw std::invalid_argument("hoeffding_bound needs trials >= 1");
  if (!(mean >= 0.0 && mean <= 1.0)) {
    throw std::invalid_argument("hoeffding_bound needs mean in [0, 1]");
  }
  const double width = std::sqrt(std::log(1.0 / alpha) / (2.0 * static_cast<double>(trials)));
  const double value = side == BoundSide::lower ? mean - width : mean + width;
  return {std::clamp(value, 0.0, 1.0), side, alpha, BoundMethod::hoeffding};
}

ConfidenceBound empirical_bernstein_bound(double mean, double sample_variance,
                                          std::int64_t trials, double alpha,
                                          BoundSide side) {
  check_alpha(alpha);
  if (trials < 2) {
    throw std::domain_error("empirical_bernstein_bound needs trials >= 2");
  }
  if (!(mean >= 0.0 && mean <= 1.0) || sample_variance < 0.0) {
    throw std::invalid_argument("empirical_bernstein_bound needs mean in [0, 1] and variance >= 0");
  }
  const double log_term = std::log(2.0 / alpha);
  const double n = static_cast<double>(trials);
  const double width = std::sqrt(2.0 * sample_variance * log_term / n) +
                       7.0 * log_term / (3.0 * (n - 1.0));
  const double value = side == BoundSide::lower ? mean - width : mean + width;
  return {std::clamp(value, 0.0, 1.0), side, alpha, BoundMethod::bernstein};
}

}  // namespace smoothcert
