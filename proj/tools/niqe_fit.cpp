// Fits a NIQE pristine model from a set of PNG images.
//
//   niqe_fit --out model.txt img1.png img2.png ...

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "dale/io.hpp"
#include "dale/niqe.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fit a NIQE pristine model", "niqe_fit"};
  std::vector<std::string> images;
  std::string out;
  std::vector<std::string> comments;
  app.add_option("images", images, "Pristine PNG images")->required();
  app.add_option("--out", out, "Model file")->required();
  app.add_option("--comment", comments, "Provenance line stored as a '#' comment");
  CLI11_PARSE(app, argc, argv);

  std::vector<Eigen::MatrixXd> blocks;
  Eigen::Index total = 0;
  for (const auto& path : images) {
    try {
      blocks.push_back(dale::niqe_patch_features(dale::read_png(path)));
      total += blocks.back().rows();
      std::cerr << path << ": " << blocks.back().rows() << " patches\n";
    } catch (const std::exception& e) {
      std::cerr << path << ": skipped (" << e.what() << ")\n";
    }
  }
  Eigen::MatrixXd rows(total, dale::kNssFeatureCount);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    rows.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  try {
    const dale::NiqeModel model = dale::fit_niqe_model(rows);
    comments.push_back(std::to_string(total) + " patches from " + std::to_string(blocks.size()) + " images");
    model.save(out, comments);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
