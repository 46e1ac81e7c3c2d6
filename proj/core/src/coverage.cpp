#include "smoothcert/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "smoothcert/cpm.hpp"
#include "smoothcert/sampling.hpp"

namespace smoothcert {

namespace {

struct ReplicationOutcome {
  bool premise_failed = false;
  bool radius_failed = false;
};

double max_competitor(const std::vector<double>& true_p, int top_class) {
  double best = 0.0;
  for (std::size_t i = 0; i < true_p.size(); ++i) {
    if (static_cast<int>(i) != top_class) best = std::max(best, true_p[i]);
  }
  return best;
}

ReplicationOutcome replicate_once(const CoverageExperiment& exp,
                                  const MultinomialOracle& oracle,
                                  double true_radius_value, std::int64_t rep) {
  const auto pilot_round = SamplingRound{exp.n0, exp.seed, selection_stream(rep)};
  const auto estimation_round = SamplingRound{exp.n, exp.seed, estimation_stream(rep)};
  ReplicationOutcome outcome;

  if (exp.procedure == Procedure::pearson_clopper_mono) {
    const ClassCounts pilot = collect_counts(oracle, pilot_round);
    const ClassCounts estimation = collect_counts(oracle, estimation_round);
    int selected = 0;
    for (int i = 1; i < pilot.num_classes(); ++i) {
      if (pilot.counts[i] > pilot.counts[selected]) selected = i;
    }
    const ConfidenceBound lower =
        clopper_pearson_lower({estimation.counts[selected], estimation.total}, exp.alpha);
    outcome.premise_failed = lower.value > exp.true_p[selected];
    const CertifiedRadius radius = radius_mono(lower.value, exp.sigma);
    outcome.radius_failed = !radius.abstained() && *radius.value > true_radius_value;
    return outcome;
  }

  CpmCertificate cert;
  if (exp.procedure == Procedure::cpm) {
    const ClassCounts pilot = collect_counts(oracle, pilot_round);
    const ClassCounts estimation = collect_counts(oracle, estimation_round);
    cert = certify_cpm(pilot, estimation, exp.alpha, exp.sigma);
  } else {
    const ClassCounts estimation = collect_counts(oracle, estimation_round);
    const double alpha_prime = exp.procedure == Procedure::bonferroni_half
                                   ? exp.alpha / 2.0
                                   : exp.alpha / estimation.num_classes();
    cert = certify_bonferroni(estimation, exp.alpha, alpha_prime, exp.sigma);
  }
  const bool lower_miss = cert.lower_top.value > exp.true_p[cert.partition.top_class];
  const bool upper_miss =
      cert.max_upper.value < max_competitor(exp.true_p, cert.partition.top_class);
  outcome.premise_failed = lower_miss || upper_miss;
  outcome.radius_failed =
      !cert.radius.abstained() && *cert.radius.value > true_radius_value;
  return outcome;
}

}  // namespace

CertifiedRadius true_radius(const std::vector<double>& true_p, RadiusKind kind,
                            double sigma) {
  if (true_p.size() < 2) {
    throw std::invalid_argument("true_radius needs at least two classes");
  }
  std::vector<double> sorted = true_p;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  if (kind == RadiusKind::mono || kind == RadiusKind::mono_lip) {
    return radius_mono(clamp_proportion(sorted[0]), sigma);
  }
  return radius_mult(clamp_proportion(sorted[0]), clamp_proportion(sorted[1]), sigma);
}

CoverageReport run_coverage(const CoverageExperiment& exp) {
  if (exp.replications < 1) {
    throw std::invalid_argument("coverage experiment needs replications >= 1");
  }
  if (exp.n < 1 || exp.n0 < 1) {
    throw std::invalid_argument("coverage experiment needs n >= 1 and n0 >= 1");
  }
  if (!(exp.alpha > 0.0 && exp.alpha < 1.0)) {
    throw std::domain_error("coverage experiment needs alpha in (0, 1)");
  }
  const MultinomialOracle oracle(exp.true_p);
  const RadiusKind kind = exp.procedure == Procedure::pearson_clopper_mono
                              ? RadiusKind::mono
                              : RadiusKind::mult;
  const CertifiedRadius truth = true_radius(exp.true_p, kind, exp.sigma);
  const double truth_value = truth.value_or_zero();

  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(
      std::min<std::int64_t>(hardware, std::max<std::int64_t>(1, exp.replications / 256)));
  std::vector<std::int64_t> premise_failures(workers, 0);
  std::vector<std::int64_t> radius_failures(workers, 0);
  const auto run_range = [&](unsigned worker) {
    for (std::int64_t rep = worker; rep < exp.replications;
         rep += static_cast<std::int64_t>(workers)) {
      const ReplicationOutcome outcome = replicate_once(exp, oracle, truth_value, rep);
      premise_failures[worker] += outcome.premise_failed ? 1 : 0;
      radius_failures[worker] += outcome.radius_failed ? 1 : 0;
    }
  };
  if (workers == 1) {
    run_range(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
    for (std::thread& t : pool) t.join();
  }

  std::int64_t premise_total = 0, radius_total = 0;
  for (unsigned w = 0; w < workers; ++w) {
    premise_total += premise_failures[w];
    radius_total += radius_failures[w];
  }

  CoverageReport report;
  const double reps = static_cast<double>(exp.replications);
  report.failure_rate = premise_total / reps;
  report.radius_failure_rate = radius_total / reps;
  report.mc_stderr = std::sqrt(report.failure_rate * (1.0 - report.failure_rate) / reps);
  report.theoretical_floor = 1.0 - exp.alpha;
  const double resolution = std::sqrt(exp.alpha * (1.0 - exp.alpha) / reps);
  if (resolution > exp.alpha / 3.0) {
    report.verdict = CoverageVerdict::inconclusive;
  } else if (report.failure_rate > exp.alpha + 3.0 * report.mc_stderr) {
    report.verdict = CoverageVerdict::undercovers;
  } else {
    report.verdict = CoverageVerdict::covers;
  }
  return report;
}

std::vector<double> find_undercoverage_p(Procedure procedure, std::int64_t n,
                                         double alpha, std::uint64_t seed,
                                         std::int64_t coarse_replications) {
  const auto score = [&](const std::vector<double>& p,
                         std::int64_t replications) -> double {
    CoverageExperiment exp;
    exp.true_p = p;
    exp.n = n;
    exp.alpha = alpha;
    exp.procedure = procedure;
    exp.replications = replications;
    exp.seed = seed;
    const CoverageReport report = run_coverage(exp);
    // Excess failure over the nominal level, in MC standard errors.
    const double stderr_floor = std::max(report.mc_stderr, 1e-12);
    return (report.failure_rate - alpha) / stderr_floor;
  };

  // Coarse pass over the sorted 3-class simplex.
  constexpr int kSteps = 20;  // step 0.05
  std::vector<double> best;
  double best_score = -1e300;
  for (int i = kSteps; i >= 1; --i) {
    for (int j = kSteps - i; j >= 0; --j) {
      const int k = kSteps - i - j;
      if (j > i || k > j) continue;
      std::vector<double> p = {i / static_cast<double>(kSteps),
                               j / static_cast<double>(kSteps),
                               k / static_cast<double>(kSteps)};
      const double s = score(p, coarse_replications);
      if (s > best_score) {
        best_score = s;
        best = p;
      }
    }
  }

  // Local refinement around the best cell.
  const double coarse_step = 1.0 / kSteps;
  for (const double step : {coarse_step / 2.0, coarse_step / 4.0}) {
    std::vector<double> center = best;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        std::vector<double> p = {center[0] + di * step, center[1] + dj * step, 0.0};
        p[2] = 1.0 - p[0] - p[1];
        if (p[0] < p[1] || p[1] < p[2] || p[2] < 0.0 || p[0] > 1.0) continue;
        const double s = score(p, 2 * coarse_replications);
        if (s > best_score) {
          best_score = s;
          best = p;
        }
      }
    }
  }
  return best;
}

const char* to_string(Procedure procedure) {
  switch (procedure) {
    case Procedure::bonferroni_c: return "bonferroni_c";
    case Procedure::bonferroni_half: return "bonferroni_half";
    case Procedure::cpm: return "cpm";
    case Procedure::pearson_clopper_mono: return "pearson_clopper_mono";
  }
  return "unknown";
}

const char* to_string(CoverageVerdict verdict) {
  switch (verdict) {
    case CoverageVerdict::covers: return "covers";
    case CoverageVerdict::undercovers: return "undercovers";
    case CoverageVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

}  // namespace smoothcert
