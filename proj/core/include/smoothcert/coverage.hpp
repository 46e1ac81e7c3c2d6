#pragma once

#include <cstdint>
#include <vector>

#include "smoothcert/radii.hpp"

namespace smoothcert {

enum class Procedure {
  bonferroni_c,          // per-class risk alpha / c
  bonferroni_half,       // the erroneous allocation: per-class risk alpha / 2
  cpm,                   // two-phase class partitioning, per-bucket risk alpha / c*
  pearson_clopper_mono,  // single lower bound at risk alpha
};

struct CoverageExperiment {
  std::vector<double> true_p;
  std::int64_t n = 1000;   // estimation draws per replication
  std::int64_t n0 = 100;   // pilot draws (cpm, pearson_clopper_mono)
  double alpha = 0.05;
  Procedure procedure = Procedure::bonferroni_c;
  std::int64_t replications = 0;
  std::uint64_t seed = 0;
  double sigma = 1.0;
};

enum class CoverageVerdict { covers, undercovers, inconclusive };

// failure_rate counts replications where the certificate's statistical
// premises fail: the lower bound overshoots the selected class's true
// probability, or the competitor upper bound falls below the strongest
// true competitor. That is the family-wise event the risk budget controls,
// so it is the statistic the verdict is judged on. radius_failure_rate
// additionally tracks replications whose emitted radius exceeds the true
// radius of the ground-truth distribution (abstentions never fail); the
// premise event implies a conservative radius, so this rate is never the
// larger of the two.
struct CoverageReport {
  double failure_rate = 0.0;
  double radius_failure_rate = 0.0;
  double mc_stderr = 0.0;
  double theoretical_floor = 0.0;  // 1 - alpha
  CoverageVerdict verdict = CoverageVerdict::inconclusive;
};

// Runs the experiment: per replication, draw counts from the multinomial,
// run the procedure, and record both failure events. Replications are
// independent streams keyed by replication index, so results do not depend
// on the number of worker threads.
CoverageReport run_coverage(const CoverageExperiment& experiment);

// Radius of the ground-truth distribution, evaluated on the sorted
// probabilities (proportions are clamped away from {0, 1} before the
// quantile).
CertifiedRadius true_radius(const std::vector<double>& true_p, RadiusKind kind,
                            double sigma);

// Simplex grid search (c = 3, step 0.05, then local refinement) for a
// distribution on which the procedure's failure rate is largest. Used to
// exhibit the undercoverage of the alpha/2 allocation.
std::vector<double> find_undercoverage_p(Procedure procedure, std::int64_t n,
                                         double alpha, std::uint64_t seed,
                                         std::int64_t coarse_replications = 4000);

const char* to_string(Procedure procedure);
const char* to_string(CoverageVerdict verdict);

}  // namespace smoothcert
