#pragma once

#include <cstdint>

namespace smoothcert {

// One Monte Carlo round reduced to a single class: k selections out of n.
struct BinomialObservation {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
};

enum class BoundSide { lower, upper };
enum class BoundMethod { clopper_pearson, hoeffding, bernstein };

// One-sided bound on a binomial proportion at risk alpha. Certification
// procedures compose these and allocate risk explicitly, so no two-sided
// primitive is provided.
struct ConfidenceBound {
  double value = 0.0;
  BoundSide side = BoundSide::lower;
  double alpha = 0.0;
  BoundMethod method = BoundMethod::clopper_pearson;
};

// Exact one-sided Clopper-Pearson bounds, obtained by inverting the
// binomial tail with bisection (tolerance 1e-12 in p). The k=0 and k=n
// endpoints use their closed forms. Throws std::domain_error on alpha
// outside (0, 1) and std::invalid_argument on a malformed observation.
ConfidenceBound clopper_pearson_lower(const BinomialObservation& obs, double alpha);
ConfidenceBound clopper_pearson_upper(const BinomialObservation& obs, double alpha);

// P[X >= k] for X ~ Binomial(n, p), summed outward from the largest term
// in log space. Exposed because the certification procedures and their
// validation both lean on it.
double binomial_upper_tail(std::int64_t k, std::int64_t n, double p);

// P[X <= k] for X ~ Binomial(n, p).
double binomial_lower_tail(std::int64_t k, std::int64_t n, double p);

// Hoeffding one-sided bound: mean -/+ sqrt(log(1/alpha) / (2n)), clamped
// to [0, 1].
ConfidenceBound hoeffding_bound(double mean, std::int64_t trials, double alpha,
                                BoundSide side);

// Empirical Bernstein one-sided bound (Maurer & Pontil):
// mean -/+ [sqrt(2 v log(2/alpha) / n) + 7 log(2/alpha) / (3(n-1))].
// Requires n >= 2.
ConfidenceBound empirical_bernstein_bound(double mean, double sample_variance,
                                          std::int64_t trials, double alpha,
                                          BoundSide side);

}  // namespace smoothcert
