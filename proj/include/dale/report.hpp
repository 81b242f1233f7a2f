#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dale/niqe.hpp"

namespace dale {

enum class Metric { loe, niqe, brisque_features };

std::string to_string(Metric metric);
Metric parse_metric(const std::string& text);

struct MetricRecord {
  std::string path;
  std::string metric;
  std::optional<double> value;
  std::string error;  // set when value is empty
};

struct MetricReport {
  std::vector<MetricRecord> records;
  // Arithmetic mean of the successful records per metric name.
  std::map<std::string, double> aggregates;

  void recompute_aggregates();
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// One unit of evaluation: a single image, or an original/enhanced pair.
struct EvalItem {
  std::string name;
  std::optional<std::filesystem::path> original;
  std::optional<std::filesystem::path> enhanced;
};

struct EvalOptions {
  std::vector<Metric> metrics;
  const NiqeModel* niqe_model = nullptr;
  int loe_grid = 50;
  int workers = 1;
};

// Items are processed independently; record order follows item order and
// metric order. Failures become error records.
MetricReport evaluate_batch(const std::vector<EvalItem>& items, const EvalOptions& options);

}  // namespace dale
