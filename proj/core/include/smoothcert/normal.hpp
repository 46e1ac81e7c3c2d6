#pragma once

namespace smoothcert {

// Standard-normal special functions. Certified radii are only as good as
// the cdf/quantile pair underneath them, so both are kept consistent to
// roughly 1e-15: the quantile is a rational approximation polished with a
// Newton step against the erfc-based cdf.

// Density of the standard normal distribution.
double std_normal_pdf(double s);

// Cumulative distribution function, accurate in both tails.
// Accepts +/-infinity and returns the corresponding limit.
double std_normal_cdf(double s);

// Inverse cdf on the open interval (0, 1).
// Throws std::domain_error for p <= 0 or p >= 1; radius code is expected
// to clamp or special-case boundary probabilities before calling.
double std_normal_quantile(double p);

// Antiderivative of the cdf: s * cdf(s) + pdf(s).
double std_normal_cdf_antiderivative(double s);

}  // namespace smoothcert
