#include "dale/slic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>

namespace dale {
namespace {

struct Center {
  double l, a, b;
  double y, x;
};

double sq(double v) { return v * v; }

double gradient_at(const Raster<double>& lab, int r, int c) {
  const int h = lab.height(), w = lab.width();
  const int cl = std::max(c - 1, 0), cr = std::min(c + 1, w - 1);
  const int ru = std::max(r - 1, 0), rd = std::min(r + 1, h - 1);
  double g = 0.0;
  for (int k = 0; k < 3; ++k) g += sq(lab(r, cr, k) - lab(r, cl, k)) + sq(lab(rd, c, k) - lab(ru, c, k));
  return g;
}

int clamp_round(double v, int hi) { return std::clamp(static_cast<int>(std::lround(v)), 0, hi); }

std::vector<Center> seed_centers(const Raster<double>& lab, const SeedGrid& grid) {
  const int h = lab.height(), w = lab.width();
  std::vector<Center> centers;
  centers.reserve(static_cast<std::size_t>(grid.rows) * grid.cols);
  for (int i = 0; i < grid.rows; ++i) {
    for (int j = 0; j < grid.cols; ++j) {
      double cy = (i + 0.5) * h / grid.rows - 0.5;
      double cx = (j + 0.5) * w / grid.cols - 0.5;
      int py = clamp_round(cy, h - 1), px = clamp_round(cx, w - 1);
      // Move to the lowest-gradient pixel of the 3x3 neighbourhood, only on strict improvement.
      const double g0 = gradient_at(lab, py, px);
      double best = g0;
      int by = py, bx = px;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int ny = py + dy, nx = px + dx;
          if (ny < 0 || nx < 0 || ny >= h || nx >= w) continue;
          const double g = gradient_at(lab, ny, nx);
          if (g < best) {
            best = g;
            by = ny;
            bx = nx;
          }
        }
      }
      if (best < g0) {
        cy = by;
        cx = bx;
        py = by;
        px = bx;
      }
      centers.push_back({lab(py, px, 0), lab(py, px, 1), lab(py, px, 2), cy, cx});
    }
  }
  return centers;
}

// Per-axis nearest initial center, i.e. the Voronoi cell of the seed lattice.
LabelRaster grid_labels(int h, int w, const SeedGrid& grid) {
  LabelRaster labels(h, w, 1);
  for (int r = 0; r < h; ++r) {
    const int i = std::min(static_cast<int>((std::int64_t(2 * r + 1) * grid.rows) / (2 * std::int64_t(h))), grid.rows - 1);
    for (int c = 0; c < w; ++c) {
      const int j = std::min(static_cast<int>((std::int64_t(2 * c + 1) * grid.cols) / (2 * std::int64_t(w))), grid.cols - 1);
      labels(r, c) = i * grid.cols + j;
    }
  }
  return labels;
}

}  // namespace

void SlicParams::validate() const {
  if (k < 1) throw ArgumentError("SLIC k must be >= 1");
  if (!(compactness > 0.0) || !std::isfinite(compactness)) throw ArgumentError("SLIC compactness must be > 0");
  if (max_iters < 1) throw ArgumentError("SLIC max_iters must be >= 1");
  if (!(min_region_frac > 0.0 && min_region_frac <= 1.0)) {
    throw ArgumentError("SLIC min_region_frac must be in (0, 1]");
  }
}

SuperpixelLabels::SuperpixelLabels(LabelRaster labels, int count) : labels_(std::move(labels)), count_(count) {
  if (labels_.channels() != 1) throw ChannelCountError("label raster must be single-channel");
  if (count_ < 1 || labels_.samples().minCoeff() < 0 || labels_.samples().maxCoeff() >= count_) {
    throw ArgumentError("labels must lie in [0, count)");
  }
}

std::vector<std::int64_t> SuperpixelLabels::region_sizes() const {
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(count_), 0);
  for (Eigen::Index i = 0; i < labels_.size(); ++i) ++sizes[labels_.samples()[i]];
  return sizes;
}

SeedGrid slic_seed_grid(int height, int width, int k) {
  const double cols_exact = std::sqrt(double(k) * width / height);
  int cols = static_cast<int>(std::ceil(cols_exact - 1e-9));
  cols = std::clamp(cols, 1, std::min(width, k));
  int rows = static_cast<int>(std::lround(double(k) / cols));
  rows = std::clamp(rows, 1, height);
  return {rows, cols};
}

int slic_grid_step(int height, int width, int k) {
  return std::max(1, static_cast<int>(std::lround(std::sqrt(double(height) * width / k))));
}

SuperpixelLabels slic(const Image& image, const SlicParams& params) {
  params.validate();
  if (image.channels() != 3) throw ChannelCountError("SLIC needs a 3-channel image");
  const int h = image.height(), w = image.width();
  if (params.k > image.pixel_count()) {
    throw ArgumentError("SLIC k=" + std::to_string(params.k) + " exceeds pixel count");
  }

  const Raster<double> lab = rgb_to_lab(image).raster();
  const int step = slic_grid_step(h, w, params.k);
  const SeedGrid grid = slic_seed_grid(h, w, params.k);
  std::vector<Center> centers = seed_centers(lab, grid);
  LabelRaster labels = grid_labels(h, w, grid);

  const double spatial_weight = sq(params.compactness / step);
  std::vector<double> dist(static_cast<std::size_t>(image.pixel_count()));
  const std::size_t n_centers = centers.size();
  std::vector<double> acc(n_centers * 5);
  std::vector<std::int64_t> members(n_centers);

  for (int iter = 0; iter < params.max_iters; ++iter) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    for (std::size_t ci = 0; ci < n_centers; ++ci) {
      const Center& cc = centers[ci];
      const int r0 = std::max(0, static_cast<int>(std::ceil(cc.y - step)));
      const int r1 = std::min(h - 1, static_cast<int>(std::floor(cc.y + step)));
      const int c0 = std::max(0, static_cast<int>(std::ceil(cc.x - step)));
      const int c1 = std::min(w - 1, static_cast<int>(std::floor(cc.x + step)));
      for (int r = r0; r <= r1; ++r) {
        const double dy2 = sq(r - cc.y);
        const double* px = lab.samples().data() + lab.index(r, c0);
        for (int c = c0; c <= c1; ++c, px += 3) {
          const double d = sq(px[0] - cc.l) + sq(px[1] - cc.a) + sq(px[2] - cc.b) +
                           (dy2 + sq(c - cc.x)) * spatial_weight;
          const std::size_t p = static_cast<std::size_t>(r) * w + c;
          // Strict comparison: the lowest center index wins ties.
          if (d < dist[p]) {
            dist[p] = d;
            labels.samples()[p] = static_cast<std::int32_t>(ci);
          }
        }
      }
    }

    std::fill(acc.begin(), acc.end(), 0.0);
    std::fill(members.begin(), members.end(), 0);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const auto ci = static_cast<std::size_t>(labels(r, c));
        double* s = acc.data() + 5 * ci;
        s[0] += lab(r, c, 0);
        s[1] += lab(r, c, 1);
        s[2] += lab(r, c, 2);
        s[3] += r;
        s[4] += c;
        ++members[ci];
      }
    }
    double max_shift = 0.0;
    for (std::size_t ci = 0; ci < n_centers; ++ci) {
      if (members[ci] == 0) continue;
      const double inv = 1.0 / double(members[ci]);
      const double* s = acc.data() + 5 * ci;
      Center next{s[0] * inv, s[1] * inv, s[2] * inv, s[3] * inv, s[4] * inv};
      const Center& prev = centers[ci];
      const double shift = std::sqrt(sq(next.l - prev.l) + sq(next.a - prev.a) + sq(next.b - prev.b) +
                                     (sq(next.y - prev.y) + sq(next.x - prev.x)) * spatial_weight);
      max_shift = std::max(max_shift, shift);
      centers[ci] = next;
    }
    if (max_shift < 0.25) break;
  }

  const auto min_size = static_cast<std::int64_t>(std::ceil(params.min_region_frac * step * step));
  return enforce_connectivity(labels, min_size);
}

SuperpixelLabels relabel_dense(const LabelRaster& labels) {
  std::unordered_map<std::int32_t, std::int32_t> remap;
  LabelRaster out(labels.height(), labels.width(), 1);
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(labels.samples()[i], static_cast<std::int32_t>(remap.size()));
    out.samples()[i] = it->second;
  }
  return SuperpixelLabels(std::move(out), static_cast<int>(remap.size()));
}

SuperpixelLabels enforce_connectivity(const LabelRaster& labels, std::int64_t min_size) {
  const int h = labels.height(), w = labels.width();
  const std::size_t n = static_cast<std::size_t>(labels.size());
  constexpr int kDy[4] = {-1, 1, 0, 0};
  constexpr int kDx[4] = {0, 0, -1, 1};

  // 4-connected components, numbered in raster order of their first pixel.
  std::vector<std::int32_t> comp(n, -1);
  std::vector<std::int64_t> size;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < n; ++start) {
    if (comp[start] >= 0) continue;
    const auto id = static_cast<std::int32_t>(size.size());
    const std::int32_t value = labels.samples()[static_cast<Eigen::Index>(start)];
    std::int64_t count = 0;
    comp[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      ++count;
      const int r = static_cast<int>(p / w), c = static_cast<int>(p % w);
      for (int d = 0; d < 4; ++d) {
        const int nr = r + kDy[d], nc = c + kDx[d];
        if (nr < 0 || nc < 0 || nr >= h || nc >= w) continue;
        const std::size_t q = static_cast<std::size_t>(nr) * w + nc;
        if (comp[q] < 0 && labels.samples()[static_cast<Eigen::Index>(q)] == value) {
          comp[q] = id;
          stack.push_back(q);
        }
      }
    }
    size.push_back(count);
  }

  const std::size_t n_comp = size.size();
  std::vector<std::set<std::int32_t>> adjacent(n_comp);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::int32_t a = comp[static_cast<std::size_t>(r) * w + c];
      if (c + 1 < w) {
        const std::int32_t b = comp[static_cast<std::size_t>(r) * w + c + 1];
        if (a != b) adjacent[a].insert(b), adjacent[b].insert(a);
      }
      if (r + 1 < h) {
        const std::int32_t b = comp[static_cast<std::size_t>(r + 1) * w + c];
        if (a != b) adjacent[a].insert(b), adjacent[b].insert(a);
      }
    }
  }

  // Union-find whose root is always the lowest component id of the region.
  std::vector<std::int32_t> parent(n_comp);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::int32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::vector<std::int32_t>> parts(n_comp);
  for (std::size_t i = 0; i < n_comp; ++i) parts[i] = {static_cast<std::int32_t>(i)};

  for (std::size_t i = 0; i < n_comp; ++i) {
    const std::int32_t root = find(static_cast<std::int32_t>(i));
    if (size[root] >= min_size) continue;
    std::int32_t target = -1;
    for (std::int32_t part : parts[root]) {
      for (std::int32_t nb : adjacent[part]) {
        const std::int32_t other = find(nb);
        if (other == root) continue;
        if (target < 0 || size[other] > size[target] || (size[other] == size[target] && other < target)) {
          target = other;
        }
      }
    }
    if (target < 0) continue;
    const std::int32_t keep = std::min(root, target), gone = std::max(root, target);
    parent[gone] = keep;
    size[keep] += size[gone];
    parts[keep].insert(parts[keep].end(), parts[gone].begin(), parts[gone].end());
    parts[gone].clear();
  }

  LabelRaster merged(h, w, 1);
  for (std::size_t p = 0; p < n; ++p) merged.samples()[static_cast<Eigen::Index>(p)] = find(comp[p]);
  return relabel_dense(merged);
}

Image boundary_overlay(const Image& image, const SuperpixelLabels& labels) {
  if (image.height() != labels.height() || image.width() != labels.width()) {
    throw DimensionMismatch("overlay labels do not match image size");
  }
  Raster<double> out = image.raster();
  const int h = image.height(), w = image.width();
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::int32_t v = labels(r, c);
      const bool edge = (r > 0 && labels(r - 1, c) != v) || (r + 1 < h && labels(r + 1, c) != v) ||
                        (c > 0 && labels(r, c - 1) != v) || (c + 1 < w && labels(r, c + 1) != v);
      if (!edge) continue;
      if (out.channels() == 3) {
        for (int k = 0; k < 3; ++k) out(r, c, k) = kBoundaryColor[static_cast<std::size_t>(k)];
      } else {
        out(r, c, 0) = 1.0;
      }
    }
  }
  return Image(std::move(out));
}

std::vector<RegionSummary> summarize_regions(const LabImage& lab, const SuperpixelLabels& labels) {
  if (lab.height() != labels.height() || lab.width() != labels.width()) {
    throw DimensionMismatch("region summary: label map does not match image size");
  }
  std::vector<RegionSummary> out(static_cast<std::size_t>(labels.count()));
  for (int i = 0; i < labels.count(); ++i) out[static_cast<std::size_t>(i)] = {i, 0, {0.0, 0.0, 0.0}};
  for (int r = 0; r < labels.height(); ++r) {
    for (int c = 0; c < labels.width(); ++c) {
      auto& s = out[static_cast<std::size_t>(labels(r, c))];
      ++s.size;
      s.mean_lab[0] += lab.lightness(r, c);
      s.mean_lab[1] += lab.a(r, c);
      s.mean_lab[2] += lab.b(r, c);
    }
  }
  for (auto& s : out) {
    for (double& v : s.mean_lab) v /= double(s.size);
  }
  return out;
}

Raster<std::uint16_t> labels_to_u16(const SuperpixelLabels& labels) {
  if (labels.count() > 65535) throw ArgumentError("too many regions for a 16-bit label PNG");
  return labels.raster().cast<std::uint16_t>();
}

}  // namespace dale
