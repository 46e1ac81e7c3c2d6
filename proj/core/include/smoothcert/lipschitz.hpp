#pragma once

#include <optional>
#include <stdexcept>

#include "smoothcert/radii.hpp"

namespace smoothcert {

// Raised when the ramp-breakpoint solver cannot bracket or converge.
// Radius computations catch it and fall back to the baseline radius
// unless the caller disabled the fallback.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lipschitz description of one soft-classifier component: the l2 constant
// in input units, plus the neighborhood radius the constant is meant to
// hold on. Evaluation happens at rho = 0; a probability range over the
// ball can be supplied separately when one is known.
struct LipschitzSpec {
  double lipschitz = 1.0;
  double rho = 0.0;
};

// The worst-case unit-noise classifier with slope limit L and smoothed
// value p at the origin: zero below ramp_start, slope L across the ramp,
// one above ramp_end = ramp_start + 1/L. derivative_bound is the largest
// directional derivative any such classifier's smoothed value can attain,
// L * (cdf(ramp_end) - cdf(ramp_start)).
struct ExtremalRamp {
  double ramp_start = 0.0;
  double ramp_end = 0.0;
  double derivative_bound = 0.0;
};

// Worst-case probability interval over a neighborhood, used to take the
// supremum of the local constant when the smoothed value is only known to
// lie in a range.
struct ProbabilityRange {
  double low = 0.0;
  double high = 1.0;
};

// Residuals of the two integral identities the ramp must satisfy:
// integral of g*phi recovers p, integral of s*g*phi recovers the
// derivative bound. Used as the independent check on the solver.
struct ExtremalCheck {
  double value_residual = 0.0;
  double derivative_residual = 0.0;
  bool ok = false;
};

// Smoothed value of the ramp classifier with breakpoint ramp_start, i.e.
// the constraint function the solver inverts. Strictly decreasing in
// ramp_start, which makes the solved breakpoint unique.
double ramp_smoothed_value(double ramp_start, double lipschitz);

// Solve for the ramp whose unit-noise smoothed value equals p.
// Requires 0 < p < 1 and lipschitz > 0; throws SolverError when the
// bracket cannot be established or Brent's method fails to converge.
ExtremalRamp solve_ramp(double p, double lipschitz);

// Value of the ramp classifier at s.
double ramp_value(const ExtremalRamp& ramp, double lipschitz, double s);

// Quadrature check of the ramp's two integral identities (tolerance 1e-8).
ExtremalCheck verify_ramp(const ExtremalRamp& ramp, double lipschitz, double p);

// Local Lipschitz constant of quantile(smoothed value) at a point where
// the smoothed classifier takes value p, in input units. With ball_values
// present, the supremum of the constant over that probability interval
// (grid of 1025 points). Never exceeds 1/sigma, the constant the standard
// radii implicitly assume.
double smoothed_lipschitz_constant(double p, double sigma, const LipschitzSpec& spec,
                                   const std::optional<ProbabilityRange>& ball_values = {});

// quantile(p1) divided by the local constant, abstaining at p1 <= 1/2.
// Falls back to radius_mono (flagged) on solver failure.
CertifiedRadius radius_mono_lip(double top_p, const LipschitzSpec& spec, double sigma,
                                bool allow_fallback = true);

// Half-difference of the two quantile-over-constant terms. Each term falls
// back to its baseline 1/sigma constant independently on solver failure.
CertifiedRadius radius_mult_lip(double top_p, double runner_up_p,
                                const LipschitzSpec& top_spec,
                                const LipschitzSpec& runner_up_spec, double sigma,
                                bool allow_fallback = true);

}  // namespace smoothcert
