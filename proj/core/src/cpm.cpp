#include "smoothcert/cpm.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace smoothcert {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("risk level alpha must lie strictly in (0, 1)");
  }
}

// Class ids ordered by descending count, lowest id first on ties.
std::vector<int> order_by_count(const ClassCounts& counts) {
  std::vector<int> order(counts.counts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return counts.counts[a] > counts.counts[b];
  });
  return order;
}

}  // namespace

Partition build_partition(const ClassCounts& initial) {
  validate_class_counts(initial);
  const std::vector<int> order = order_by_count(initial);
  Partition partition;
  partition.top_class = order[0];
  const int second = order[1];
  partition.attack_singletons.push_back(second);
  const std::int64_t second_count = initial.counts[second];

  std::int64_t meta_sum = 0;
  for (std::size_t i = 2; i < order.size(); ++i) {
    meta_sum += initial.counts[order[i]];
  }
  // Peel the largest remaining class out of the meta bucket while the
  // bucket still outweighs I2.
  std::size_t next = 2;
  while (next < order.size() && meta_sum > second_count) {
    partition.attack_singletons.push_back(order[next]);
    meta_sum -= initial.counts[order[next]];
    ++next;
  }
  partition.meta_class.assign(order.begin() + next, order.end());
  std::sort(partition.meta_class.begin(), partition.meta_class.end());
  partition.num_buckets = static_cast<int>(partition.attack_singletons.size()) +
                          (partition.meta_class.empty() ? 0 : 1) + 1;
  return partition;
}

CpmCertificate certify_cpm(const ClassCounts& initial, const ClassCounts& estimation,
                           double alpha, double sigma) {
  validate_class_counts(initial);
  validate_class_counts(estimation);
  check_alpha(alpha);
  if (initial.num_classes() != estimation.num_classes()) {
    throw std::invalid_argument("initial and estimation rounds must cover the same classes");
  }
  if (estimation.total < 1) {
    throw std::invalid_argument("estimation round must contain at least one draw");
  }

  CpmCertificate cert;
  cert.partition = build_partition(initial);
  cert.alpha_prime = alpha / cert.partition.num_buckets;

  const std::int64_t n = estimation.total;
  cert.lower_top = clopper_pearson_lower(
      {estimation.counts[cert.partition.top_class], n}, cert.alpha_prime);

  // Upper bounds per attack bucket: each singleton count, and the summed
  // meta-class count as a single binomial observation (the bucket
  // indicator is itself Bernoulli).
  bool have_upper = false;
  for (int class_id : cert.partition.attack_singletons) {
    const ConfidenceBound upper =
        clopper_pearson_upper({estimation.counts[class_id], n}, cert.alpha_prime);
    if (!have_upper || upper.value > cert.max_upper.value) {
      cert.max_upper = upper;
      have_upper = true;
    }
  }
  if (!cert.partition.meta_class.empty()) {
    std::int64_t meta_count = 0;
    for (int class_id : cert.partition.meta_class) {
      meta_count += estimation.counts[class_id];
    }
    const ConfidenceBound upper = clopper_pearson_upper({meta_count, n}, cert.alpha_prime);
    if (!have_upper || upper.value > cert.max_upper.value) {
      cert.max_upper = upper;
    }
  }

  cert.radius = plugin_radius_mult(cert.lower_top, cert.max_upper, sigma);
  return cert;
}

CpmCertificate certify_bonferroni(const ClassCounts& estimation, double alpha,
                                  double alpha_prime, double sigma) {
  validate_class_counts(estimation);
  check_alpha(alpha);
  check_alpha(alpha_prime);
  const std::int64_t n = estimation.total;
  if (n < 1) {
    throw std::invalid_argument("estimation round must contain at least one draw");
  }
  const int c = estimation.num_classes();

  // Classes sharing a count share both bounds; with many classes the
  // distinct counts are few, so compute per distinct value.
  std::map<std::int64_t, std::pair<ConfidenceBound, ConfidenceBound>> by_count;
  for (std::int64_t k : estimation.counts) {
    if (!by_count.count(k)) {
      by_count.emplace(k, std::make_pair(clopper_pearson_lower({k, n}, alpha_prime),
                                         clopper_pearson_upper({k, n}, alpha_prime)));
    }
  }

  CpmCertificate cert;
  // I1: highest lower bound, lowest class id on ties. Lower bounds are
  // monotone in k, so this is the argmax count.
  int top = 0;
  for (int i = 1; i < c; ++i) {
    if (estimation.counts[i] > estimation.counts[top]) top = i;
  }
  cert.lower_top = by_count.at(estimation.counts[top]).first;

  bool have_upper = false;
  for (int i = 0; i < c; ++i) {
    if (i == top) continue;
    const ConfidenceBound& upper = by_count.at(estimation.counts[i]).second;
    if (!have_upper || upper.value > cert.max_upper.value) {
      cert.max_upper = upper;
      have_upper = true;
    }
  }

  cert.partition.top_class = top;
  cert.partition.attack_singletons.reserve(c - 1);
  for (int i = 0; i < c; ++i) {
    if (i != top) cert.partition.attack_singletons.push_back(i);
  }
  cert.partition.num_buckets = c;
  cert.alpha_prime = alpha_prime;
  cert.radius = plugin_radius_mult(cert.lower_top, cert.max_upper, sigma);
  return cert;
}

CpmCertificate certify_bonferroni_full(const ClassCounts& estimation, double alpha,
                                       double sigma) {
  return certify_bonferroni(estimation, alpha, alpha / estimation.num_classes(), sigma);
}

CertifiedRadius certify_pearson_clopper_mono(const BinomialObservation& estimation_top,
                                             double alpha, double sigma) {
  const ConfidenceBound lower = clopper_pearson_lower(estimation_top, alpha);
  return radius_mono(lower.value, sigma);
}

}  // namespace smoothcert
