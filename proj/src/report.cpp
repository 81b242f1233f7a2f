#include "dale/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "dale/brisque.hpp"
#include "dale/io.hpp"
#include "dale/loe.hpp"
#include "dale/parallel.hpp"

namespace dale {
namespace {

std::string feature_name(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "brisque_f%02d", i);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void add_error(std::vector<MetricRecord>& out, const std::string& path, const std::string& metric,
               const std::string& error) {
  out.push_back({path, metric, std::nullopt, error});
}

std::vector<MetricRecord> evaluate_item(const EvalItem& item, const EvalOptions& options) {
  std::vector<MetricRecord> out;
  std::optional<Image> original, enhanced;
  std::string load_error;
  try {
    if (item.original) original = read_png(*item.original);
    if (item.enhanced) enhanced = read_png(*item.enhanced);
  } catch (const std::exception& e) {
    load_error = e.what();
  }

  for (Metric metric : options.metrics) {
    const std::string name = to_string(metric);
    if (!load_error.empty()) {
      if (metric == Metric::brisque_features) {
        for (int i = 0; i < 36; ++i) add_error(out, item.name, feature_name(i), load_error);
      } else {
        add_error(out, item.name, name, load_error);
      }
      continue;
    }
    // Single-image metrics score the enhanced image when one is given.
    const Image* subject = enhanced ? &*enhanced : (original ? &*original : nullptr);
    try {
      switch (metric) {
        case Metric::loe:
          if (!original || !enhanced) throw ArgumentError("LOE needs an original/enhanced pair");
          out.push_back({item.name, name, loe(*original, *enhanced, options.loe_grid), {}});
          break;
        case Metric::niqe:
          if (!options.niqe_model) throw ArgumentError("NIQE needs a model");
          if (!subject) throw ArgumentError("no image to score");
          out.push_back({item.name, name, niqe(*subject, *options.niqe_model), {}});
          break;
        case Metric::brisque_features: {
          if (!subject) throw ArgumentError("no image to score");
          const Eigen::VectorXd f = brisque_features(*subject);
          for (int i = 0; i < f.size(); ++i) out.push_back({item.name, feature_name(i), f[i], {}});
          break;
        }
      }
    } catch (const std::exception& e) {
      if (metric == Metric::brisque_features) {
        for (int i = 0; i < 36; ++i) add_error(out, item.name, feature_name(i), e.what());
      } else {
        add_error(out, item.name, name, e.what());
      }
    }
  }
  return out;
}

}  // namespace

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::loe:
      return "loe";
    case Metric::niqe:
      return "niqe";
    case Metric::brisque_features:
      return "brisque-features";
  }
  return "loe";
}

Metric parse_metric(const std::string& text) {
  if (text == "loe") return Metric::loe;
  if (text == "niqe") return Metric::niqe;
  if (text == "brisque-features") return Metric::brisque_features;
  throw ArgumentError("unknown metric '" + text + "'");
}

void MetricReport::recompute_aggregates() {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& r : records) {
    if (!r.value) continue;
    auto& [sum, n] = acc[r.metric];
    sum += *r.value;
    ++n;
  }
  aggregates.clear();
  for (const auto& [metric, sn] : acc) aggregates[metric] = sn.first / double(sn.second);
}

nlohmann::json MetricReport::to_json() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json e = {{"path", r.path}, {"metric", r.metric}};
    if (r.value) {
      e["value"] = *r.value;
    } else {
      e["value"] = nullptr;
      e["error"] = r.error;
    }
    recs.push_back(std::move(e));
  }
  nlohmann::json agg = nlohmann::json::object();
  for (const auto& [metric, mean] : aggregates) agg[metric] = mean;
  return {{"records", std::move(recs)}, {"aggregates", std::move(agg)}};
}

std::string MetricReport::to_csv() const {
  std::ostringstream out;
  out << "path,metric,value,error\n";
  for (const auto& r : records) {
    out << csv_field(r.path) << ',' << csv_field(r.metric) << ',' << (r.value ? format_value(*r.value) : "") << ','
        << csv_field(r.error) << '\n';
  }
  for (const auto& [metric, mean] : aggregates) out << "*mean*," << csv_field(metric) << ',' << format_value(mean) << ",\n";
  return out.str();
}

MetricReport evaluate_batch(const std::vector<EvalItem>& items, const EvalOptions& options) {
  std::vector<std::vector<MetricRecord>> slots(items.size());
  parallel_for(items.size(), options.workers, [&](std::size_t i) { slots[i] = evaluate_item(items[i], options); });
  MetricReport report;
  for (auto& s : slots) {
    for (auto& r : s) report.records.push_back(std::move(r));
  }
  report.recompute_aggregates();
  return report;
}

}  // namespace dale
