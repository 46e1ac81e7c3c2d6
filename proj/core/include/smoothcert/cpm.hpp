#pragma once

#include <vector>

#include "smoothcert/counts.hpp"
#include "smoothcert/radii.hpp"

namespace smoothcert {

// Grouping of classes into buckets from a pilot sampling round: the top
// class stands alone, the strongest competitors get singleton buckets, and
// everything left pools into one meta-class. num_buckets is the Bonferroni
// divisor c*: singletons plus the meta bucket (when nonempty) plus one for
// the top class.
struct Partition {
  int top_class = 0;                    // I1
  std::vector<int> attack_singletons;   // I2 first, then peeled classes
  std::vector<int> meta_class;          // ascending class ids; may be empty
  int num_buckets = 0;                  // c*
};

// Certificate emitted by the partition-based or full-Bonferroni procedure.
struct CpmCertificate {
  CertifiedRadius radius;
  ConfidenceBound lower_top;    // lower bound on the top class
  ConfidenceBound max_upper;    // largest upper bound over the attack buckets
  Partition partition;
  double alpha_prime = 0.0;     // per-bucket risk alpha / c*
};

// Pilot-phase partitioning: I1 and I2 are the two largest counts, the rest
// start as the meta-class, and classes peel off into singleton buckets
// (largest count first) while the meta-class total still exceeds I2's
// count. Ties break toward the lowest class id, which makes the partition
// deterministic. An emptied meta-class is dropped from the bucket list.
Partition build_partition(const ClassCounts& initial);

// Two-phase certification: the partition comes from the pilot counts only,
// the confidence bounds from the estimation counts only, each bucket at
// risk alpha / c*. The certificate is for the class selected in phase 1; a
// weak phase-2 count shows up as a nonpositive margin and abstains.
CpmCertificate certify_cpm(const ClassCounts& initial, const ClassCounts& estimation,
                           double alpha, double sigma);

// Baseline comparator: per-class Clopper-Pearson bounds all at risk
// alpha_prime, I1 the class with the highest lower bound, the competitor
// bound the largest upper bound among the rest. Callers own the risk
// allocation; certify_bonferroni_full fixes alpha_prime = alpha / c.
CpmCertificate certify_bonferroni(const ClassCounts& estimation, double alpha,
                                  double alpha_prime, double sigma);
CpmCertificate certify_bonferroni_full(const ClassCounts& estimation, double alpha,
                                       double sigma);

// Single-class certification: the mono radius on a Clopper-Pearson lower
// bound for the class selected in an independent round.
CertifiedRadius certify_pearson_clopper_mono(const BinomialObservation& estimation_top,
                                             double alpha, double sigma);

}  // namespace smoothcert
