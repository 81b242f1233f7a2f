#pragma once

#include <cstdint>
#include <span>

#include "dale/raster.hpp"

namespace dale {

// Lightness order error.
//
// For lightness maps L (original) and L' (enhanced) over m pixels,
//   LOE = (1/m) * sum_x sum_y [U(L(x), L(y)) xor U(L'(x), L'(y))],  U(p, q) = (p >= q).
// Ties count as ordered on both sides, so they never contribute.

inline constexpr int kDefaultLoeGrid = 50;
inline constexpr int kLoeBruteforceMaxSide = 128;

// Number of ordered pairs (x, y) whose order disagrees, in O(m log m).
std::int64_t order_disagreements(std::span<const double> original, std::span<const double> enhanced);

// Target size so the shorter side is at most `grid`, aspect preserved.
std::pair<int, int> loe_sample_size(int height, int width, int grid);

// Lightness maps, nearest-neighbour downsampling to `grid`, then the sorted count.
double loe(const Image& original, const Image& enhanced, int grid = kDefaultLoeGrid);

// Direct double loop over all pixel pairs, no downsampling. Both sides must be
// at most kLoeBruteforceMaxSide.
double loe_bruteforce(const Image& original, const Image& enhanced);

}  // namespace dale
