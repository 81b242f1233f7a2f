#include "dale/spec_json.hpp"

namespace dale {
namespace {

using nlohmann::json;

json rect_json(const Rect& r) {
  return {{"top", r.top}, {"left", r.left}, {"height", r.height}, {"width", r.width}};
}

Rect rect_from(const json& j) {
  return {j.at("top").get<int>(), j.at("left").get<int>(), j.at("height").get<int>(), j.at("width").get<int>()};
}

json regions_json(const RegionGeometry& regions) {
  if (const auto* labels = std::get_if<LabelRaster>(&regions)) {
    json runs = json::array();
    const auto& s = labels->samples();
    Eigen::Index i = 0;
    while (i < s.size()) {
      Eigen::Index j = i;
      while (j < s.size() && s[j] == s[i]) ++j;
      runs.push_back({s[i], j - i});
      i = j;
    }
    return {{"kind", "labels"}, {"height", labels->height()}, {"width", labels->width()}, {"runs", std::move(runs)}};
  }
  if (const auto* leaves = std::get_if<std::vector<QuadLeaf>>(&regions)) {
    json out = json::array();
    for (const auto& leaf : *leaves) {
      json e = rect_json(leaf.rect);
      e["id"] = leaf.id;
      out.push_back(std::move(e));
    }
    return {{"kind", "quadtree"}, {"leaves", std::move(out)}};
  }
  const auto& frame = std::get<WholeFrame>(regions);
  return {{"kind", "frame"}, {"height", frame.height}, {"width", frame.width}};
}

RegionGeometry regions_from(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "labels") {
    LabelRaster labels(j.at("height").get<int>(), j.at("width").get<int>(), 1);
    Eigen::Index pos = 0;
    for (const auto& run : j.at("runs")) {
      const auto id = run.at(0).get<std::int32_t>();
      const auto len = run.at(1).get<Eigen::Index>();
      if (len < 1 || pos + len > labels.size()) throw FormatError("label runs overflow the region map");
      labels.samples().segment(pos, len).setConstant(id);
      pos += len;
    }
    if (pos != labels.size()) throw FormatError("label runs do not cover the region map");
    return labels;
  }
  if (kind == "quadtree") {
    std::vector<QuadLeaf> leaves;
    for (const auto& e : j.at("leaves")) leaves.push_back({e.at("id").get<std::int32_t>(), rect_from(e)});
    return leaves;
  }
  if (kind == "frame") return WholeFrame{j.at("height").get<int>(), j.at("width").get<int>()};
  throw FormatError("unknown region kind '" + kind + "'");
}

}  // namespace

nlohmann::json spec_to_json(const IlluminationSpec& spec) {
  json weights = json::array();
  for (const auto& [id, level] : spec.levels) weights.push_back({id, level.value()});
  json out = {
      {"mode", std::string(to_string(spec.mode))},
      {"seed", spec.seed},
      {"weights", std::move(weights)},
      {"regions", regions_json(spec.regions)},
  };
  if (spec.window) out["window"] = rect_json(*spec.window);
  return out;
}

IlluminationSpec spec_from_json(const nlohmann::json& j) {
  try {
    IlluminationSpec spec;
    spec.mode = parse_mode(j.at("mode").get<std::string>());
    spec.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& w : j.at("weights")) {
      spec.levels.emplace(w.at(0).get<std::int32_t>(), IlluminationLevel::from_value(w.at(1).get<double>()));
    }
    spec.regions = regions_from(j.at("regions"));
    if (j.contains("window")) spec.window = rect_from(j.at("window"));
    return spec;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed sample spec: ") + e.what());
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("invalid sample spec: ") + e.what());
  }
}

}  // namespace dale
