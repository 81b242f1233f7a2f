#include "dale/loe.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "dale/color.hpp"
#include "dale/resample.hpp"

namespace dale {
namespace {

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t i) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  // Count of inserted ranks < i.
  std::int64_t prefix(std::size_t i) const {
    std::int64_t s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<std::int64_t> tree_;
};

void require_same_extent(const Image& a, const Image& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw DimensionMismatch("LOE needs equally sized images");
  }
}

}  // namespace

std::int64_t order_disagreements(std::span<const double> original, std::span<const double> enhanced) {
  if (original.size() != enhanced.size()) throw DimensionMismatch("LOE inputs differ in length");
  const std::size_t m = original.size();

  // Dense ranks of the enhanced values (equal values share a rank).
  std::vector<double> sorted(enhanced.begin(), enhanced.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> rank(m);
  for (std::size_t i = 0; i < m; ++i) {
    rank[i] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), enhanced[i]) - sorted.begin());
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return original[a] < original[b]; });

  // Disagreeing ordered pairs split into
  //   A: a_y <= a_x and b_y > b_x     B: a_y < a_x and b_y >= b_x
  // Walking groups of equal original value, B queries before the group is
  // inserted and A after.
  Fenwick tree(sorted.size());
  std::int64_t inserted = 0, total = 0;
  std::size_t g = 0;
  while (g < m) {
    std::size_t end = g;
    while (end < m && original[order[end]] == original[order[g]]) ++end;
    for (std::size_t i = g; i < end; ++i) total += inserted - tree.prefix(rank[order[i]]);
    for (std::size_t i = g; i < end; ++i) {
      tree.add(rank[order[i]]);
      ++inserted;
    }
    for (std::size_t i = g; i < end; ++i) total += inserted - tree.prefix(rank[order[i]] + 1);
    g = end;
  }
  return total;
}

std::pair<int, int> loe_sample_size(int height, int width, int grid) {
  if (grid < 1) throw ArgumentError("LOE grid must be positive");
  const int shorter = std::min(height, width);
  if (shorter <= grid) return {height, width};
  const auto scale = [&](int side) {
    return std::max(1, static_cast<int>(std::int64_t(side) * grid / shorter));
  };
  return {scale(height), scale(width)};
}

double loe(const Image& original, const Image& enhanced, int grid) {
  require_same_extent(original, enhanced);
  const auto [h, w] = loe_sample_size(original.height(), original.width(), grid);
  FloatMap a = lightness(original), b = lightness(enhanced);
  if (h != original.height() || w != original.width()) {
    a = resize_nearest(a, h, w);
    b = resize_nearest(b, h, w);
  }
  const auto n = static_cast<std::size_t>(a.size());
  const std::int64_t count = order_disagreements({a.samples().data(), n}, {b.samples().data(), n});
  return static_cast<double>(count) / static_cast<double>(n);
}

double loe_bruteforce(const Image& original, const Image& enhanced) {
  require_same_extent(original, enhanced);
  if (original.height() > kLoeBruteforceMaxSide || original.width() > kLoeBruteforceMaxSide) {
    throw ArgumentError("loe_bruteforce is limited to " + std::to_string(kLoeBruteforceMaxSide) + "px per side");
  }
  const FloatMap a = lightness(original), b = lightness(enhanced);
  const Eigen::Index m = a.size();
  std::int64_t count = 0;
  for (Eigen::Index x = 0; x < m; ++x) {
    for (Eigen::Index y = 0; y < m; ++y) {
      const bool u = a.samples()[x] >= a.samples()[y];
      const bool v = b.samples()[x] >= b.samples()[y];
      count += (u != v);
    }
  }
  return static_cast<double>(count) / static_cast<double>(m);
}

}  // namespace dale
