#include "smoothcert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "smoothcert/normal.hpp"

namespace smoothcert {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

ClassCounts make_class_counts(std::vector<std::int64_t> counts) {
  ClassCounts result;
  result.counts = std::move(counts);
  result.total = std::accumulate(result.counts.begin(), result.counts.end(),
                                 std::int64_t{0});
  validate_class_counts(result);
  return result;
}

void validate_class_counts(const ClassCounts& counts) {
  if (counts.counts.size() < 2) {
    throw std::invalid_argument("class counts need at least two classes");
  }
  std::int64_t sum = 0;
  for (std::int64_t c : counts.counts) {
    if (c < 0) throw std::invalid_argument("class counts must be nonnegative");
    sum += c;
  }
  if (sum != counts.total) {
    throw std::invalid_argument("class counts do not sum to the declared total");
  }
}

SampleRng::SampleRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  state_ = mix64(seed + kGolden);
  state_ = mix64(state_ ^ (stream + kGolden));
  state_ = mix64(state_ ^ (index + kGolden));
}

std::uint64_t SampleRng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double SampleRng::uniform01() {
  // 53 random bits shifted into (0, 1); the half-step offset keeps both
  // endpoints out.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double SampleRng::standard_normal() { return std_normal_quantile(uniform01()); }

int multinomial_sample(std::span<const double> probabilities, SampleRng& rng) {
  if (probabilities.size() < 1) {
    throw std::invalid_argument("multinomial_sample needs a nonempty probability vector");
  }
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw std::invalid_argument("multinomial probabilities must be >= 0");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("multinomial probabilities must sum to 1");
  }
  const double u = rng.uniform01() * sum;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < probabilities.size(); ++i) {
    acc += probabilities[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probabilities.size()) - 1;
}

MultinomialOracle::MultinomialOracle(std::vector<double> probabilities)
    : probabilities_(std::move(probabilities)) {
  if (probabilities_.size() < 2) {
    throw std::invalid_argument("multinomial oracle needs at least two classes");
  }
  double sum = 0.0;
  for (double p : probabilities_) {
    if (!(p >= 0.0)) throw std::invalid_argument("multinomial probabilities must be >= 0");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("multinomial probabilities must sum to 1");
  }
  cumulative_.resize(probabilities_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities_.size(); ++i) {
    acc += probabilities_[i];
    cumulative_[i] = acc;
  }
  cumulative_.back() = sum;  // guard against rounding drift at the top
}

int MultinomialOracle::num_classes() const {
  return static_cast<int>(probabilities_.size());
}

int MultinomialOracle::predict(SampleRng& rng) const {
  const double u = rng.uniform01() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) return num_classes() - 1;
  return static_cast<int>(it - cumulative_.begin());
}

std::uint64_t selection_stream(std::int64_t input_id) {
  return 2 * static_cast<std::uint64_t>(input_id);
}

std::uint64_t estimation_stream(std::int64_t input_id) {
  return 2 * static_cast<std::uint64_t>(input_id) + 1;
}

ClassCounts collect_counts(const ClassifierOracle& oracle, const SamplingRound& round) {
  if (round.draws < 1) {
    throw std::invalid_argument("collect_counts needs at least one draw");
  }
  ClassCounts result;
  result.counts.assign(oracle.num_classes(), 0);
  result.total = round.draws;
  for (std::int64_t i = 0; i < round.draws; ++i) {
    SampleRng rng(round.seed, round.stream, static_cast<std::uint64_t>(i));
    int label;
    try {
      label = oracle.predict(rng);
    } catch (const std::exception& e) {
      throw std::runtime_error("classifier oracle failed at sample index " +
                               std::to_string(i) + ": " + e.what());
    }
    if (label < 0 || label >= oracle.num_classes()) {
      throw std::runtime_error("classifier oracle returned class " +
                               std::to_string(label) + " at sample index " +
                               std::to_string(i));
    }
    ++result.counts[label];
  }
  return result;
}

ExtremalBinaryClassifier::ExtremalBinaryClassifier(double lipschitz,
                                                   double target_smoothed_value,
                                                   double sigma)
    : lipschitz_(lipschitz), sigma_(sigma), target_(target_smoothed_value) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  ramp_ = solve_ramp(target_smoothed_value, lipschitz);
}

double ExtremalBinaryClassifier::soft_value(double x) const {
  return ramp_value(ramp_, lipschitz_, x / sigma_);
}

double ExtremalBinaryClassifier::smoothed_value(double x) const {
  // E[g(u + Z)] with Z standard normal and u = x / sigma has a closed form:
  // the ramp contributes L * ((u - s0) * (cdf(b) - cdf(a)) + pdf(a) - pdf(b))
  // with a = s0 - u, b = s1 - u, and the saturated piece contributes
  // 1 - cdf(b).
  const double u = x / sigma_;
  const double a = ramp_.ramp_start - u;
  const double b = ramp_.ramp_end - u;
  const double ramp_mass =
      lipschitz_ * ((u - ramp_.ramp_start) * (std_normal_cdf(b) - std_normal_cdf(a)) +
                    std_normal_pdf(a) - std_normal_pdf(b));
  return ramp_mass + 1.0 - std_normal_cdf(b);
}

double ExtremalBinaryClassifier::smoothed_slope_at_origin() const {
  return ramp_.derivative_bound / sigma_;
}

int ExtremalBinaryClassifier::predict(SampleRng& rng) const {
  const double noise = sigma_ * rng.standard_normal();
  return soft_value(noise) >= 0.5 ? 0 : 1;
}

double monte_carlo_smoothed_value(const ExtremalBinaryClassifier& classifier, double x,
                                  std::int64_t draws, std::uint64_t seed,
                                  std::uint64_t stream) {
  if (draws < 1) throw std::invalid_argument("monte_carlo_smoothed_value needs draws >= 1");
  double sum = 0.0;
  for (std::int64_t i = 0; i < draws; ++i) {
    SampleRng rng(seed, stream, static_cast<std::uint64_t>(i));
    sum += classifier.soft_value(x + classifier.sigma() * rng.standard_normal());
  }
  return sum / static_cast<double>(draws);
}

}  // namespace smoothcert
