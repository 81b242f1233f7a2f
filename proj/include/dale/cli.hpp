#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dale/losses.hpp"
#include "dale/report.hpp"
#include "dale/slic.hpp"
#include "dale/synthesis.hpp"

namespace dale::cli {

enum ExitCode : int { kSuccess = 0, kPartialFailure = 1, kArgumentError = 2 };

struct InputFile {
  std::filesystem::path path;
  std::string relative;  // stable name used for ids and per-image seeds
};

// Files are taken as-is, directories contribute their *.png entries, and
// a wildcard in the final component is matched against its directory.
// Sorted by relative name.
std::vector<InputFile> collect_inputs(const std::vector<std::string>& inputs);

// seed XOR FNV-1a(relative path).
std::uint64_t per_image_seed(std::uint64_t seed, const std::string& relative);

struct SynthConfig {
  std::vector<std::string> inputs;
  std::filesystem::path out;
  std::uint64_t seed = 0;
  int workers = 1;
  IlluminationMode mode = IlluminationMode::superpixel;
  SlicParams slic;
  QuadtreeParams quadtree;
  std::optional<double> level;  // forces L in global mode
  int patch = 240;
  int patches_per_image = 0;    // 0 writes the full frame
  int bit_depth = 16;
};

struct EvalConfig {
  std::vector<std::string> inputs;
  std::optional<std::filesystem::path> original;
  std::optional<std::filesystem::path> enhanced;
  std::filesystem::path out;
  std::vector<Metric> metrics;
  std::optional<std::filesystem::path> niqe_model;
  int loe_grid = 50;
  int workers = 1;
  std::uint64_t seed = 0;
};

struct SlicConfig {
  std::string input;
  std::filesystem::path out;
  SlicParams slic;
};

struct LossesConfig {
  std::vector<std::string> inputs;  // reference, then estimate
  std::optional<std::filesystem::path> features_a;
  std::optional<std::filesystem::path> features_b;
  VanLossWeights van;
  EnLossWeights en;
  std::optional<std::filesystem::path> out;
};

int cmd_synth(const SynthConfig& config, std::ostream& log);
int cmd_eval(const EvalConfig& config, std::ostream& out, std::ostream& log);
int cmd_slic(const SlicConfig& config, std::ostream& log);
int cmd_losses(const LossesConfig& config, std::ostream& out, std::ostream& log);

// Full command line front end: `dale <synth|eval|slic|losses> [flags]`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log);

}  // namespace dale::cli
