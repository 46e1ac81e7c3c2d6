#pragma once

#include <optional>

#include "smoothcert/intervals.hpp"

namespace smoothcert {

enum class RadiusKind { mono, mult, mono_lip, mult_lip };

// An l2 certified radius, or abstain when the statistical margin is
// nonpositive. Abstain is an explicit state rather than a sentinel value:
// downstream reporting has to distinguish "no certificate" from "radius 0".
struct CertifiedRadius {
  RadiusKind kind = RadiusKind::mono;
  double sigma = 1.0;
  std::optional<double> value;
  // Set when a Lipschitz-adjusted radius fell back to its baseline because
  // the breakpoint solver failed.
  bool used_fallback = false;

  bool abstained() const { return !value.has_value(); }
  double value_or_zero() const { return value.value_or(0.0); }
};

// Degenerate probabilities at 0 or 1 would push the quantile to +/-inf;
// a certificate built from such a bound is capped at this many sigmas.
inline constexpr double kRadiusCapSigmas = 1e6;

// Clamp a raw empirical proportion into the open unit interval before it
// meets the quantile. Never apply this to confidence bounds; those are
// interior by construction except at the k=0 / k=n closed forms, which the
// radius functions handle explicitly.
double clamp_proportion(double p);

// sigma * quantile(p1) for p1 > 1/2, abstain otherwise.
CertifiedRadius radius_mono(double top_p, double sigma);

// (sigma/2) * (quantile(p1) - quantile(p2)), abstain when the margin is
// nonpositive. Certifies a nontrivial radius even when p1 < 1/2.
CertifiedRadius radius_mult(double top_p, double runner_up_p, double sigma);

// radius_mult evaluated on a lower confidence bound for the top class and
// an upper confidence bound for the strongest competitor; conservative for
// the true radius with probability at least 1 - (total allocated risk).
CertifiedRadius plugin_radius_mult(const ConfidenceBound& lower_top,
                                   const ConfidenceBound& upper_runner_up,
                                   double sigma);

}  // namespace smoothcert
