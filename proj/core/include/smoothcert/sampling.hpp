#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smoothcert/counts.hpp"
#include "smoothcert/lipschitz.hpp"

namespace smoothcert {

// Counter-based generator: every (seed, stream, index) triple opens an
// independent deterministic sequence, so sampling parallelizes without
// shared mutable state and counts merge by plain summation.
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

  std::uint64_t next_u64();
  // Uniform draw in the open interval (0, 1).
  double uniform01();
  // Standard normal via the inverse cdf.
  double standard_normal();

 private:
  std::uint64_t state_;
};

// Hard classifier under test: maps one noise draw to a class id in
// [0, num_classes). Must be deterministic given the rng sequence.
class ClassifierOracle {
 public:
  virtual ~ClassifierOracle() = default;
  virtual int num_classes() const = 0;
  virtual int predict(SampleRng& rng) const = 0;
};

// Inverse-cdf draw from a probability vector. Throws
// std::invalid_argument when the entries are negative or do not sum to 1
// within 1e-9.
int multinomial_sample(std::span<const double> probabilities, SampleRng& rng);

// Synthetic hard classifier whose smoothed distribution is exactly the
// given multinomial.
class MultinomialOracle final : public ClassifierOracle {
 public:
  explicit MultinomialOracle(std::vector<double> probabilities);
  int num_classes() const override;
  int predict(SampleRng& rng) const override;
  const std::vector<double>& probabilities() const { return probabilities_; }

 private:
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
};

struct SamplingRound {
  std::int64_t draws = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Distinct streams for the two phases of a certification run. Selection
// and estimation must come from independent draws, so the two phases of
// one input never share a stream id.
std::uint64_t selection_stream(std::int64_t input_id);
std::uint64_t estimation_stream(std::int64_t input_id);

// Collects argmax counts over `draws` independent noise draws. Oracle
// failures are rethrown with the failing sample index attached.
ClassCounts collect_counts(const ClassifierOracle& oracle, const SamplingRound& round);

// One-dimensional binary classifier realizing the worst case allowed by a
// Lipschitz budget: its soft class-0 score is the solved ramp evaluated at
// x / sigma, so the smoothed score at the origin is exactly
// target_smoothed_value and the slope of the smoothed score there attains
// the theoretical bound. Gaussian noise in d dimensions reduces to this
// 1-d projection by rotational invariance.
class ExtremalBinaryClassifier final : public ClassifierOracle {
 public:
  // lipschitz is the slope limit in unit-noise coordinates; the soft score
  // is (lipschitz / sigma)-Lipschitz in input units. Propagates SolverError.
  ExtremalBinaryClassifier(double lipschitz, double target_smoothed_value, double sigma);

  double soft_value(double x) const;
  // Closed-form smoothed score at x.
  double smoothed_value(double x) const;
  // Slope of the smoothed score at the origin, in input units.
  double smoothed_slope_at_origin() const;

  int num_classes() const override { return 2; }
  int predict(SampleRng& rng) const override;

  const ExtremalRamp& ramp() const { return ramp_; }
  double lipschitz() const { return lipschitz_; }
  double sigma() const { return sigma_; }
  double target() const { return target_; }

 private:
  double lipschitz_;
  double sigma_;
  double target_;
  ExtremalRamp ramp_;
};

// Monte Carlo average of the soft score at x.
double monte_carlo_smoothed_value(const ExtremalBinaryClassifier& classifier, double x,
                                  std::int64_t draws, std::uint64_t seed,
                                  std::uint64_t stream);

}  // namespace smoothcert
