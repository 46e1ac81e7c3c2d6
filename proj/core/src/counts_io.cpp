#include "smoothcert/counts_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace smoothcert {

namespace {

using nlohmann::json;

CountsRecord parse_record(const json& j) {
  CountsRecord record;
  record.input_id = j.at("input_id").get<std::int64_t>();
  const std::string phase = j.at("phase").get<std::string>();
  if (phase == "selection") {
    record.phase = SamplingPhase::selection;
  } else if (phase == "estimation") {
    record.phase = SamplingPhase::estimation;
  } else {
    throw std::invalid_argument("phase must be \"selection\" or \"estimation\"");
  }
  const auto declared_n = j.at("n").get<std::int64_t>();
  const auto num_classes = j.at("num_classes").get<std::int64_t>();
  if (num_classes < 2) {
    throw std::invalid_argument("num_classes must be at least 2");
  }
  record.counts.counts.assign(static_cast<std::size_t>(num_classes), 0);
  std::int64_t sum = 0;
  for (const auto& [key, value] : j.at("counts").items()) {
    std::size_t parsed_chars = 0;
    const long long class_id = std::stoll(key, &parsed_chars);
    if (parsed_chars != key.size() || class_id < 0 || class_id >= num_classes) {
      throw std::invalid_argument("counts key \"" + key + "\" is not a class id in [0, " +
                                  std::to_string(num_classes) + ")");
    }
    const auto count = value.get<std::int64_t>();
    if (count < 0) {
      throw std::invalid_argument("count for class " + key + " is negative");
    }
    record.counts.counts[static_cast<std::size_t>(class_id)] = count;
    sum += count;
  }
  if (sum != declared_n) {
    throw std::invalid_argument("counts sum to " + std::to_string(sum) +
                                " but n declares " + std::to_string(declared_n));
  }
  record.counts.total = declared_n;
  record.sigma = j.at("sigma").get<double>();
  if (!(record.sigma > 0.0)) {
    throw std::invalid_argument("sigma must be positive");
  }
  record.model_tag = j.value("model_tag", std::string{});
  return record;
}

}  // namespace

CountsFile read_counts_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open counts file: " + path);
  }
  CountsFile result;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      result.records.push_back(parse_record(json::parse(line)));
    } catch (const std::exception& e) {
      result.issues.push_back({line_number, e.what()});
    }
  }
  return result;
}

void write_counts_file(const std::string& path, std::span<const CountsRecord> records) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open counts file for writing: " + path);
  }
  for (const CountsRecord& record : records) {
    json counts = json::object();
    for (std::size_t i = 0; i < record.counts.counts.size(); ++i) {
      if (record.counts.counts[i] != 0) {
        counts[std::to_string(i)] = record.counts.counts[i];
      }
    }
    const json j = {
        {"input_id", record.input_id},
        {"phase", to_string(record.phase)},
        {"n", record.counts.total},
        {"num_classes", record.counts.num_classes()},
        {"counts", std::move(counts)},
        {"sigma", record.sigma},
        {"model_tag", record.model_tag},
    };
    out << j.dump() << '\n';
  }
}

const char* to_string(SamplingPhase phase) {
  return phase == SamplingPhase::selection ? "selection" : "estimation";
}

}  // namespace smoothcert
