#include "smoothcert/lipschitz.hpp"

#include <algorithm>
#include <cmath>

#include "smoothcert/normal.hpp"
#include "smoothcert/quadrature.hpp"
#include "smoothcert/root_finding.hpp"

namespace smoothcert {

namespace {

void check_interior_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("smoothed value must lie strictly in (0, 1)");
  }
}

void check_lipschitz(double lipschitz) {
  if (!(lipschitz > 0.0)) {
    throw std::invalid_argument("Lipschitz constant must be positive");
  }
}

// cdf(b) - cdf(a) without cancellation. For narrow intervals the direct
// difference of two O(1) cdf values loses the digits the constraint needs
// once it gets multiplied back by L, so integrate the density instead;
// one Kronrod panel is exact to machine precision at these widths.
double cdf_difference(double a, double b) {
  const double width = b - a;
  if (width >= 0.25) {
    return std_normal_cdf(b) - std_normal_cdf(a);
  }
  return detail::gauss_kronrod_15([](double s) { return std_normal_pdf(s); }, a, b)
      .first;
}

// pdf(b) - pdf(a) via expm1 in the regime where the two values are close.
double pdf_difference(double a, double b) {
  const double exponent = -0.5 * (b - a) * (b + a);
  if (std::fabs(exponent) <= 1.0) {
    return std_normal_pdf(a) * std::expm1(exponent);
  }
  return std_normal_pdf(b) - std_normal_pdf(a);
}

}  // namespace

double ramp_smoothed_value(double ramp_start, double lipschitz) {
  check_lipschitz(lipschitz);
  const double h = 1.0 / lipschitz;
  const double s1 = ramp_start + h;
  // 1 - L * integral of cdf over [s0, s0 + 1/L], written as
  // 1 - (L*s0*(cdf(s1)-cdf(s0)) + cdf(s1) + L*(pdf(s1)-pdf(s0))) so every
  // difference of nearby values is formed by a cancellation-free route.
  const double d_cdf = cdf_difference(ramp_start, s1);
  const double d_pdf = pdf_difference(ramp_start, s1);
  return 1.0 - (lipschitz * ramp_start * d_cdf + std_normal_cdf(s1) + lipschitz * d_pdf);
}

ExtremalRamp solve_ramp(double p, double lipschitz) {
  check_interior_probability(p);
  check_lipschitz(lipschitz);
  const auto constraint = [&](double s0) { return ramp_smoothed_value(s0, lipschitz) - p; };
  double lo = -50.0, hi = 50.0;
  double f_lo = constraint(lo), f_hi = constraint(hi);
  // The constraint decreases from 1 to 0, so f_lo > 0 > f_hi for interior p;
  // expand geometrically in case an extreme (p, L) pair pushes the root out.
  int expansions = 0;
  while ((f_lo > 0.0) == (f_hi > 0.0)) {
    if (++expansions > 6) {
      throw SolverError("solve_ramp: could not bracket the breakpoint");
    }
    lo *= 2.0;
    hi *= 2.0;
    f_lo = constraint(lo);
    f_hi = constraint(hi);
  }
  const RootResult root = brent_root(constraint, lo, hi, f_lo, f_hi, 1e-14, 200);
  if (!root.converged) {
    throw SolverError("solve_ramp: Brent iteration did not converge");
  }
  ExtremalRamp ramp;
  ramp.ramp_start = root.root;
  ramp.ramp_end = root.root + 1.0 / lipschitz;
  ramp.derivative_bound = lipschitz * cdf_difference(ramp.ramp_start, ramp.ramp_end);
  return ramp;
}

double ramp_value(const ExtremalRamp& ramp, double lipschitz, double s) {
  if (s <= ramp.ramp_start) return 0.0;
  if (s >= ramp.ramp_end) return 1.0;
  return lipschitz * (s - ramp.ramp_start);
}

ExtremalCheck verify_ramp(const ExtremalRamp& ramp, double lipschitz, double p) {
  const double lo = std::max(-40.0, ramp.ramp_start - 40.0);
  const double hi = 40.0;
  const auto integrate_pieces = [&](auto&& integrand) {
    // Split at the ramp breakpoints; the integrand has kinks there.
    double total = 0.0;
    double cuts[4] = {lo, std::clamp(ramp.ramp_start, lo, hi),
                      std::clamp(ramp.ramp_end, lo, hi), hi};
    for (int i = 0; i < 3; ++i) {
      total += integrate(integrand, cuts[i], cuts[i + 1], 1e-11, 1e-12).value;
    }
    return total;
  };
  const double mass = integrate_pieces([&](double s) {
    return ramp_value(ramp, lipschitz, s) * std_normal_pdf(s);
  });
  const double first_moment = integrate_pieces([&](double s) {
    return s * ramp_value(ramp, lipschitz, s) * std_normal_pdf(s);
  });
  ExtremalCheck check;
  check.value_residual = std::fabs(mass - p);
  check.derivative_residual = std::fabs(first_moment - ramp.derivative_bound);
  check.ok = check.value_residual <= 1e-8 && check.derivative_residual <= 1e-8;
  return check;
}

double smoothed_lipschitz_constant(double p, double sigma, const LipschitzSpec& spec,
                                   const std::optional<ProbabilityRange>& ball_values) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  check_lipschitz(spec.lipschitz);
  // Smoothing F (Lipschitz L in input units) with noise sigma matches
  // smoothing x -> F(sigma * x) (Lipschitz sigma * L) with unit noise, so
  // the unit-noise constant at effective slope sigma*L is divided by sigma
  // to get back to input units.
  const double effective_slope = sigma * spec.lipschitz;
  const auto unit_constant = [&](double value) {
    check_interior_probability(value);
    const ExtremalRamp ramp = solve_ramp(value, effective_slope);
    const double density = std_normal_pdf(std_normal_quantile(value));
    // The unconstrained optimum is exactly the density, so the ratio can
    // only exceed 1 by rounding; clip it back.
    return std::min(1.0, ramp.derivative_bound / density);
  };
  if (!ball_values.has_value()) {
    return unit_constant(p) / sigma;
  }
  const double low = std::max(ball_values->low, 1e-12);
  const double high = std::min(ball_values->high, 1.0 - 1e-12);
  if (!(low <= high)) {
    throw std::invalid_argument("ball probability range is empty");
  }
  constexpr int kGridPoints = 1025;
  double sup = 0.0;
  for (int i = 0; i < kGridPoints; ++i) {
    const double value = low + (high - low) * i / (kGridPoints - 1.0);
    sup = std::max(sup, unit_constant(value));
  }
  return sup / sigma;
}

CertifiedRadius radius_mono_lip(double top_p, const LipschitzSpec& spec, double sigma,
                                bool allow_fallback) {
  check_interior_probability(top_p);
  CertifiedRadius radius{RadiusKind::mono_lip, sigma, std::nullopt, false};
  if (top_p <= 0.5) return radius;
  try {
    const double constant = smoothed_lipschitz_constant(top_p, sigma, spec);
    radius.value = std_normal_quantile(top_p) / constant;
    return radius;
  } catch (const SolverError&) {
    if (!allow_fallback) throw;
    CertifiedRadius fallback = radius_mono(top_p, sigma);
    fallback.kind = RadiusKind::mono_lip;
    fallback.used_fallback = true;
    return fallback;
  }
}

CertifiedRadius radius_mult_lip(double top_p, double runner_up_p,
                                const LipschitzSpec& top_spec,
                                const LipschitzSpec& runner_up_spec, double sigma,
                                bool allow_fallback) {
  check_interior_probability(top_p);
  check_interior_probability(runner_up_p);
  CertifiedRadius radius{RadiusKind::mult_lip, sigma, std::nullopt, false};
  // Per-term fallback: a failed term reverts to the baseline 1/sigma
  // constant, which is what radius_mult implicitly divides by.
  bool fell_back = false;
  const auto term = [&](double value, const LipschitzSpec& spec) {
    try {
      return std_normal_quantile(value) / smoothed_lipschitz_constant(value, sigma, spec);
    } catch (const SolverError&) {
      if (!allow_fallback) throw;
      fell_back = true;
      return sigma * std_normal_quantile(value);
    }
  };
  const double margin = 0.5 * (term(top_p, top_spec) - term(runner_up_p, runner_up_spec));
  radius.used_fallback = fell_back;
  if (std::isnan(margin) || margin <= 0.0) return radius;
  radius.value = margin;
  return radius;
}

}  // namespace smoothcert
