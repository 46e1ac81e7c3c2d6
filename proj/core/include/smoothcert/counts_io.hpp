#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smoothcert/counts.hpp"

namespace smoothcert {

enum class SamplingPhase { selection, estimation };

// One sampling round of one input, as stored in a counts file. The file is
// line-oriented JSON, one record per line:
//
//   {"input_id": 0, "phase": "selection", "n": 100, "num_classes": 1000,
//    "counts": {"3": 80, "17": 15, "401": 5}, "sigma": 0.5,
//    "model_tag": "resnet50-noise0.5"}
//
// counts is a sparse map from 0-based class id to count; absent classes
// are zero. n must equal the sum of the counts.
struct CountsRecord {
  std::int64_t input_id = 0;
  SamplingPhase phase = SamplingPhase::selection;
  ClassCounts counts;
  double sigma = 0.0;
  std::string model_tag;
};

struct CountsFileIssue {
  std::size_t line = 0;
  std::string message;
};

struct CountsFile {
  std::vector<CountsRecord> records;
  std::vector<CountsFileIssue> issues;
};

// Parses a counts file. Unreadable files throw std::runtime_error; a line
// that fails to parse or violates a record invariant is dropped and
// reported in issues with its line number.
CountsFile read_counts_file(const std::string& path);

// Writes records in the line-oriented format above.
void write_counts_file(const std::string& path, std::span<const CountsRecord> records);

const char* to_string(SamplingPhase phase);

}  // namespace smoothcert
