#pragma once

#include <cstdint>
#include <vector>

namespace smoothcert {

// Per-class selection counts from one Monte Carlo sampling round.
// Class ids are 0-based indices into counts.
struct ClassCounts {
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;

  int num_classes() const { return static_cast<int>(counts.size()); }
};

// Builds counts from a vector, filling in the total. Throws
// std::invalid_argument when a count is negative or fewer than two
// classes are present.
ClassCounts make_class_counts(std::vector<std::int64_t> counts);

// Validates an externally assembled value (negative entries, sum/total
// mismatch, class count).
void validate_class_counts(const ClassCounts& counts);

}  // namespace smoothcert
