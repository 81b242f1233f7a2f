#include "dale/cli.hpp"

#include <fnmatch.h>

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>

#include "dale/io.hpp"
#include "dale/keyed_random.hpp"
#include "dale/losses.hpp"
#include "dale/parallel.hpp"
#include "dale/spec_json.hpp"

#ifndef DALE_DEFAULT_NIQE_MODEL
#define DALE_DEFAULT_NIQE_MODEL ""
#endif

namespace dale::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool is_png(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png";
}

Image as_rgb(const Image& image) {
  if (image.channels() == 3) return image;
  Raster<double> rgb(image.height(), image.width(), 3);
  for (int k = 0; k < 3; ++k) rgb.channel(k) = image.raster().channel(0);
  return Image(std::move(rgb));
}

std::string sample_stem(const std::string& relative) {
  std::string stem = fs::path(relative).replace_extension().generic_string();
  std::replace(stem.begin(), stem.end(), '/', '_');
  return stem;
}

std::string dump_line(const json& j) { return j.dump() + "\n"; }

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// Writes one sample quartet; returns its manifest line.
std::string write_sample(const SamplePair& pair, const std::string& id, const InputFile& source,
                         const SynthConfig& config) {
  const fs::path& dir = config.out;
  const std::string gt = id + "_gt.png", low = id + "_low.png", va = id + "_va.pfm", spec = id + "_spec.json";
  write_png(pair.ground_truth, dir / gt, config.bit_depth);
  write_png(pair.low_light, dir / low, config.bit_depth);
  write_pfm(pair.attention, dir / va);
  json spec_json = spec_to_json(pair.spec);
  spec_json["source"] = source.relative;
  spec_json["bit_depth"] = config.bit_depth;
  write_text(dir / spec, spec_json.dump() + "\n");
  return dump_line({{"id", id},
                    {"source", source.relative},
                    {"seed", pair.spec.seed},
                    {"mode", std::string(to_string(pair.spec.mode))},
                    {"height", pair.ground_truth.height()},
                    {"width", pair.ground_truth.width()},
                    {"gt", gt},
                    {"low", low},
                    {"va", va},
                    {"spec", spec}});
}

std::vector<std::string> synthesize_file(const InputFile& input, const SynthConfig& config) {
  const Image image = read_png(input.path);
  const std::uint64_t seed = per_image_seed(config.seed, input.relative);
  SamplePair pair = [&] {
    switch (config.mode) {
      case IlluminationMode::superpixel:
        return synthesize_local(image, slic(as_rgb(image), config.slic), seed);
      case IlluminationMode::quadtree:
        return synthesize_quadtree(image, seed, config.quadtree);
      case IlluminationMode::global:
        break;
    }
    if (config.level) {
      SamplePair p = synthesize_global(image, *config.level);
      p.spec.seed = seed;
      return p;
    }
    return synthesize_global_random(image, seed);
  }();

  const std::string stem = sample_stem(input.relative);
  std::vector<std::string> lines;
  if (config.patches_per_image > 0) {
    const auto patches = crop_pairs(pair, config.patch, config.patches_per_image, seed);
    for (std::size_t i = 0; i < patches.size(); ++i) {
      char suffix[16];
      std::snprintf(suffix, sizeof suffix, "_p%03zu", i);
      lines.push_back(write_sample(quantize_pair(patches[i], config.bit_depth), stem + suffix, input, config));
    }
  } else {
    lines.push_back(write_sample(quantize_pair(pair, config.bit_depth), stem, input, config));
  }
  return lines;
}

// Reads `key = value` lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read config file " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ArgumentError("config line without '=': " + line);
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<double> parse_weights(const std::string& text, std::size_t n, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.size() != n) throw ArgumentError(std::string(what) + " needs " + std::to_string(n) + " comma-separated values");
  for (double v : out) {
    if (!(v >= 0.0)) throw ArgumentError(std::string(what) + " must be nonnegative");
  }
  return out;
}

}  // namespace

std::vector<InputFile> collect_inputs(const std::vector<std::string>& inputs) {
  std::vector<InputFile> out;
  std::set<std::string> seen;
  const auto add = [&](const fs::path& path, std::string relative) {
    if (seen.insert(relative).second) out.push_back({path, std::move(relative)});
  };
  for (const auto& raw : inputs) {
    const fs::path p(raw);
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && is_png(entry.path())) add(entry.path(), entry.path().filename().string());
      }
    } else if (p.filename().string().find_first_of("*?[") != std::string::npos) {
      const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
      const std::string pattern = p.filename().string();
      if (fs::is_directory(dir)) {
        for (const auto& entry : fs::directory_iterator(dir)) {
          const std::string name = entry.path().filename().string();
          if (entry.is_regular_file() && fnmatch(pattern.c_str(), name.c_str(), 0) == 0) add(entry.path(), name);
        }
      }
    } else {
      if (!fs::exists(p)) throw ArgumentError("input not found: " + raw);
      add(p, p.filename().string());
    }
  }
  std::sort(out.begin(), out.end(), [](const InputFile& a, const InputFile& b) { return a.relative < b.relative; });
  return out;
}

std::uint64_t per_image_seed(std::uint64_t seed, const std::string& relative) {
  return seed ^ stable_hash(relative);
}

int cmd_synth(const SynthConfig& config, std::ostream& log) {
  config.slic.validate();
  if (config.patch < 16) throw ArgumentError("patch size must be at least 16");
  if (config.workers < 1) throw ArgumentError("workers must be >= 1");
  if (config.patches_per_image < 0) throw ArgumentError("patches-per-image must be >= 0");
  if (config.bit_depth != 8 && config.bit_depth != 16) throw ArgumentError("bit depth must be 8 or 16");
  if (config.level && config.mode != IlluminationMode::global) {
    throw ArgumentError("--level applies to global mode only");
  }
  if (config.level) IlluminationLevel::from_value(*config.level);

  const auto inputs = collect_inputs(config.inputs);
  if (inputs.empty()) throw ArgumentError("no input images");
  fs::create_directories(config.out);
  const fs::path manifest_path = config.out / "manifest.jsonl";
  std::ofstream manifest(manifest_path, std::ios::trunc);
  if (!manifest) throw std::runtime_error("cannot write " + manifest_path.string());

  // Manifest lines are committed in input order as soon as every earlier
  // image has finished, so the file is identical for any worker count.
  std::mutex mu;
  std::vector<std::optional<std::vector<std::string>>> done(inputs.size());
  std::size_t next_commit = 0;
  std::size_t failures = 0;

  parallel_for(inputs.size(), config.workers, [&](std::size_t i) {
    std::vector<std::string> lines;
    std::string error;
    try {
      lines = synthesize_file(inputs[i], config);
    } catch (const std::exception& e) {
      error = e.what();
    }
    std::lock_guard lock(mu);
    if (!error.empty()) {
      ++failures;
      log << "[synth] skipped " << inputs[i].path.string() << ": " << error << '\n';
    }
    done[i] = std::move(lines);
    while (next_commit < done.size() && done[next_commit]) {
      for (const auto& line : *done[next_commit]) {
        manifest << line;
        manifest.flush();
      }
      ++next_commit;
    }
  });

  log << "[synth] " << (inputs.size() - failures) << "/" << inputs.size() << " images, seed " << config.seed << '\n';
  return failures == 0 ? kSuccess : kPartialFailure;
}

int cmd_eval(const EvalConfig& config, std::ostream& out, std::ostream& log) {
  if (config.workers < 1) throw ArgumentError("workers must be >= 1");
  if (config.original.has_value() != config.enhanced.has_value()) {
    throw ArgumentError("--original and --enhanced must be given together");
  }
  std::vector<Metric> metrics = config.metrics;
  if (metrics.empty()) metrics.push_back(config.original ? Metric::loe : Metric::niqe);

  std::vector<EvalItem> items;
  if (config.original) {
    std::map<std::string, EvalItem> by_name;
    for (const auto& f : collect_inputs({config.original->string()})) by_name[f.relative] = {f.relative, f.path, {}};
    for (const auto& f : collect_inputs({config.enhanced->string()})) {
      auto& item = by_name[f.relative];
      item.name = f.relative;
      item.enhanced = f.path;
    }
    for (auto& [name, item] : by_name) items.push_back(std::move(item));
  }
  for (const auto& f : collect_inputs(config.inputs)) items.push_back({f.relative, f.path, {}});

  std::optional<NiqeModel> model;
  if (std::find(metrics.begin(), metrics.end(), Metric::niqe) != metrics.end()) {
    const fs::path model_path = config.niqe_model.value_or(fs::path(DALE_DEFAULT_NIQE_MODEL));
    if (model_path.empty()) throw ArgumentError("NIQE requested but no --niqe-model given");
    model = NiqeModel::load(model_path);
  }

  MetricReport report;
  if (items.empty()) {
    log << "[eval] warning: no input images\n";
  } else {
    EvalOptions options{metrics, model ? &*model : nullptr, config.loe_grid, config.workers};
    // Pairs whose counterpart is missing become error records.
    std::vector<EvalItem> runnable;
    for (const auto& item : items) {
      if (config.original && (!item.original || !item.enhanced)) {
        for (Metric m : metrics) {
          report.records.push_back({item.name, to_string(m), std::nullopt,
                                    item.original ? "no matching enhanced image" : "no matching original image"});
        }
      } else {
        runnable.push_back(item);
      }
    }
    MetricReport computed = evaluate_batch(runnable, options);
    // Keep the deterministic name order across matched and unmatched items.
    report.records.insert(report.records.end(), computed.records.begin(), computed.records.end());
    std::stable_sort(report.records.begin(), report.records.end(),
                     [](const MetricRecord& a, const MetricRecord& b) { return a.path < b.path; });
    report.recompute_aggregates();
  }

  if (!config.out.empty()) {
    fs::create_directories(config.out);
    json j = report.to_json();
    j["seed"] = config.seed;
    write_text(config.out / "report.json", j.dump(2) + "\n");
    write_text(config.out / "report.csv", report.to_csv());
  }
  json summary = {{"records", report.records.size()}, {"aggregates", report.to_json()["aggregates"]}};
  out << summary.dump() << '\n';

  const bool any_error = std::any_of(report.records.begin(), report.records.end(),
                                     [](const MetricRecord& r) { return !r.value.has_value(); });
  return any_error ? kPartialFailure : kSuccess;
}

int cmd_slic(const SlicConfig& config, std::ostream& log) {
  const Image image = read_png(config.input);
  const Image rgb = as_rgb(image);
  const SuperpixelLabels labels = slic(rgb, config.slic);
  const std::string stem = fs::path(config.input).stem().string();
  fs::create_directories(config.out);
  write_file(config.out / (stem + "_labels.png"), encode_png_gray16(labels_to_u16(labels)));
  write_png(boundary_overlay(image, labels), config.out / (stem + "_overlay.png"), 8);

  json regions = json::array();
  for (const auto& r : summarize_regions(rgb_to_lab(rgb), labels)) {
    regions.push_back({{"id", r.id}, {"size", r.size}, {"mean_lab", r.mean_lab}});
  }
  const json doc = {{"source", config.input},
                    {"height", labels.height()},
                    {"width", labels.width()},
                    {"k", config.slic.k},
                    {"compactness", config.slic.compactness},
                    {"count", labels.count()},
                    {"regions", std::move(regions)}};
  write_text(config.out / (stem + "_regions.json"), doc.dump(2) + "\n");
  log << "[slic] " << config.input << ": " << labels.count() << " regions\n";
  return kSuccess;
}

int cmd_losses(const LossesConfig& config, std::ostream& out, std::ostream&) {
  if (config.inputs.size() != 2) throw ArgumentError("losses needs exactly two --input images (reference, estimate)");
  if (config.features_a.has_value() != config.features_b.has_value()) {
    throw ArgumentError("--features-a and --features-b must be given together");
  }
  const Image reference = read_png(config.inputs[0]);
  const Image estimate = read_png(config.inputs[1]);
  if (!reference.same_shape(estimate)) throw DimensionMismatch("loss inputs differ in size");

  const double l2 = l2_loss(reference, estimate);
  const double tv = tv_loss(estimate);
  double feature = 0.0;
  json doc = {{"l2", l2}, {"tv", tv}};
  if (config.features_a) {
    feature = l1_feature_loss(read_pfm(*config.features_a), read_pfm(*config.features_b));
    doc["l1_feature"] = feature;
  }
  doc["van_total"] = van_total_loss(l2, feature, config.van);
  doc["en_total"] = en_total_loss(l2, feature, tv, config.en);
  doc["van_weights"] = {config.van.attention, config.van.perceptual};
  doc["en_weights"] = {config.en.pixel, config.en.perceptual, config.en.smoothness};
  out << doc.dump() << '\n';
  if (config.out) write_text(*config.out, doc.dump(2) + "\n");
  return kSuccess;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log) {
  CLI::App app{"Local-illumination dataset synthesis and low-light quality metrics", "dale"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> inputs;
  std::string out_dir;
  std::uint64_t seed = 0;
  int workers = 1;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", inputs, "Input image files, directories or globs");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Base seed (recorded in outputs)");
    sub->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--config", config_path, "key=value file; flags override it");
  };

  SynthConfig synth;
  std::string mode = "superpixel";
  auto* synth_cmd = app.add_subcommand("synth", "Synthesize locally illuminated training samples");
  add_common(synth_cmd);
  synth_cmd->add_option("--mode", mode, "superpixel | quadtree | global")
      ->check(CLI::IsMember({"superpixel", "quadtree", "global"}));
  synth_cmd->add_option("--k", synth.slic.k, "Target superpixel count");
  synth_cmd->add_option("--compactness", synth.slic.compactness, "SLIC compactness m");
  synth_cmd->add_option("--max-iters", synth.slic.max_iters, "SLIC iterations");
  synth_cmd->add_option("--patch", synth.patch, "Patch side length");
  synth_cmd->add_option("--patches-per-image", synth.patches_per_image, "Random patches per image (0 = full frame)");
  synth_cmd->add_option("--max-depth", synth.quadtree.max_depth, "Quad-tree depth limit");
  synth_cmd->add_option("--split-prob", synth.quadtree.split_prob, "Quad-tree split probability");
  double level = 0.0;
  auto* level_opt = synth_cmd->add_option("--level", level, "Fixed L for global mode");
  synth_cmd->add_option("--bit-depth", synth.bit_depth, "PNG bit depth (8 or 16)");

  EvalConfig eval;
  std::vector<std::string> metric_names;
  std::string original_dir, enhanced_dir, niqe_model;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate LOE / NIQE / BRISQUE features");
  add_common(eval_cmd);
  eval_cmd->add_option("--metric", metric_names, "loe | niqe | brisque-features")
      ->check(CLI::IsMember({"loe", "niqe", "brisque-features"}));
  eval_cmd->add_option("--original", original_dir, "Directory of original images");
  eval_cmd->add_option("--enhanced", enhanced_dir, "Directory of enhanced images");
  eval_cmd->add_option("--niqe-model", niqe_model, "NIQE model file");
  eval_cmd->add_option("--loe-grid", eval.loe_grid, "LOE downsampling target");

  SlicConfig slic_config;
  auto* slic_cmd = app.add_subcommand("slic", "Segment one image and write labels, overlay and region summary");
  add_common(slic_cmd);
  slic_cmd->add_option("--k", slic_config.slic.k, "Target superpixel count");
  slic_cmd->add_option("--compactness", slic_config.slic.compactness, "SLIC compactness m");
  slic_cmd->add_option("--max-iters", slic_config.slic.max_iters, "SLIC iterations");

  LossesConfig losses;
  std::string features_a, features_b, van_weights = "0.5,1", en_weights = "1,5,1";
  auto* losses_cmd = app.add_subcommand("losses", "Loss functionals for an image pair");
  add_common(losses_cmd);
  losses_cmd->add_option("--features-a", features_a, "Feature map PFM of the estimate side");
  losses_cmd->add_option("--features-b", features_b, "Feature map PFM of the reference side");
  losses_cmd->add_option("--van-weights", van_weights, "lambda1,lambda2 for the attention loss");
  losses_cmd->add_option("--en-weights", en_weights, "lambda1,lambda2,lambda3 for the enhancement loss");

  // Config-file values are spliced in after the subcommand, skipping keys
  // given on the command line or unknown to that subcommand.
  std::vector<std::string> argv_store = {"dale"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  for (std::size_t i = 1; i + 1 < argv_store.size(); ++i) {
    if (argv_store[i] == "--config") config_path = argv_store[i + 1];
  }
  for (std::size_t i = 1; i < argv_store.size(); ++i) {
    if (argv_store[i].rfind("--config=", 0) == 0) config_path = argv_store[i].substr(9);
  }
  try {
    if (!config_path.empty() && argv_store.size() > 1) {
      CLI::App* sub = nullptr;
      for (auto* s : {synth_cmd, eval_cmd, slic_cmd, losses_cmd}) {
        if (s->get_name() == argv_store[1]) sub = s;
      }
      if (sub) {
        std::set<std::string> given;
        for (const auto& a : args) {
          if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
        }
        std::vector<std::string> spliced;
        for (const auto& [key, value] : read_config_file(config_path)) {
          if (key == "config" || given.count(key) || !sub->get_option_no_throw("--" + key)) continue;
          spliced.push_back("--" + key);
          spliced.push_back(value);
        }
        argv_store.insert(argv_store.begin() + 2, spliced.begin(), spliced.end());
      }
    }

    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    log << "error: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? kSuccess : kArgumentError;
  } catch (const ArgumentError& e) {
    log << "error: " << e.what() << '\n';
    return kArgumentError;
  }

  try {
    if (synth_cmd->parsed()) {
      synth.inputs = inputs;
      synth.out = out_dir.empty() ? fs::path("dataset") : fs::path(out_dir);
      synth.seed = seed;
      synth.workers = workers;
      synth.mode = parse_mode(mode);
      if (level_opt->count()) synth.level = level;
      return cmd_synth(synth, log);
    }
    if (eval_cmd->parsed()) {
      eval.inputs = inputs;
      if (!original_dir.empty()) eval.original = original_dir;
      if (!enhanced_dir.empty()) eval.enhanced = enhanced_dir;
      eval.out = out_dir;
      for (const auto& m : metric_names) eval.metrics.push_back(parse_metric(m));
      if (!niqe_model.empty()) eval.niqe_model = niqe_model;
      eval.workers = workers;
      eval.seed = seed;
      return cmd_eval(eval, out, log);
    }
    if (slic_cmd->parsed()) {
      if (inputs.size() != 1) throw ArgumentError("slic needs exactly one --input image");
      slic_config.input = inputs.front();
      slic_config.out = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
      return cmd_slic(slic_config, log);
    }
    losses.inputs = inputs;
    if (!features_a.empty()) losses.features_a = features_a;
    if (!features_b.empty()) losses.features_b = features_b;
    const auto van = parse_weights(van_weights, 2, "--van-weights");
    const auto en = parse_weights(en_weights, 3, "--en-weights");
    losses.van = {van[0], van[1]};
    losses.en = {en[0], en[1], en[2]};
    if (!out_dir.empty()) losses.out = fs::path(out_dir) / "losses.json";
    return cmd_losses(losses, out, log);
  } catch (const ArgumentError& e) {
    log << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kPartialFailure;
  }
}

}  // namespace dale::cli
