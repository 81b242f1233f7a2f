#include <gtest/gtest.h>

#include <array>

#include "dale/io.hpp"
#include "dale/keyed_random.hpp"
#include "dale/slic.hpp"
#include "dale/spec_json.hpp"
#include "dale/synthesis.hpp"
#include "support.hpp"

namespace dale {
namespace {

double round_trip_error(const SamplePair& p) {
  return (p.low_light.samples() + p.attention.samples() - p.ground_truth.samples()).abs().maxCoeff();
}

LabelRaster halves_labels(int h, int w) {
  LabelRaster l(h, w, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) l(y, x) = x < w / 2 ? 0 : 1;
  }
  return l;
}

TEST(Level, DiscreteSetOnly) {
  EXPECT_EQ(IlluminationLevel::from_value(0.1).tenths(), 1);
  EXPECT_EQ(IlluminationLevel::from_value(1.0).tenths(), 10);
  EXPECT_EQ(IlluminationLevel::from_value(0.7).value(), 0.7);
  EXPECT_THROW(IlluminationLevel::from_value(0.0), ArgumentError);
  EXPECT_THROW(IlluminationLevel::from_value(0.35), ArgumentError);
  EXPECT_THROW(IlluminationLevel::from_value(1.1), ArgumentError);
  EXPECT_THROW(IlluminationLevel::from_tenths(11), ArgumentError);
}

TEST(Level, DrawsAreUniform) {
  // Chi-square, 9 degrees of freedom; 21.666 is the p = 0.01 critical value.
  constexpr double kCritical = 21.666;
  for (std::uint64_t seed : {0ULL, 1ULL, 0xdeadbeefULL}) {
    std::array<int, 10> counts{};
    constexpr int n = 10000;
    for (int r = 0; r < n; ++r) ++counts[draw_level(seed, r).tenths() - 1];
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - n / 10.0) * (c - n / 10.0) / (n / 10.0);
    EXPECT_LT(chi2, kCritical) << "seed " << seed;
  }
  // Same region across many seeds.
  std::array<int, 10> counts{};
  for (std::uint64_t s = 0; s < 10000; ++s) ++counts[draw_level(s, 3).tenths() - 1];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - 1000.0) * (c - 1000.0) / 1000.0;
  EXPECT_LT(chi2, kCritical);
}

TEST(KeyedRandom, PureFunctionOfKey) {
  EXPECT_EQ(keyed_bits(5, Stream::region_level, 9), keyed_bits(5, Stream::region_level, 9));
  EXPECT_NE(keyed_bits(5, Stream::region_level, 9), keyed_bits(5, Stream::quadtree_split, 9));
  EXPECT_NE(keyed_bits(5, Stream::region_level, 9), keyed_bits(6, Stream::region_level, 9));
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(keyed_below(1, Stream::patch_window, i, 7), 7u);
    const double u = keyed_unit(1, Stream::patch_window, i);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  // FNV-1a reference values.
  EXPECT_EQ(stable_hash(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(stable_hash("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Local, UnitLevelsAreIdentity) {
  const Image img = test::random_image(10, 12, 3, 1);
  IlluminationSpec spec;
  spec.mode = IlluminationMode::superpixel;
  spec.levels = {{0, IlluminationLevel::from_tenths(10)}, {1, IlluminationLevel::from_tenths(10)}};
  spec.regions = halves_labels(10, 12);
  const SamplePair p = apply_illumination(img, spec);
  EXPECT_TRUE(p.low_light == img);
  EXPECT_TRUE((p.attention.samples() == 0.0).all());
}

TEST(Local, HandCase) {
  const Image img = Image::constant(4, 6, 3, 0.8);
  IlluminationSpec spec;
  spec.mode = IlluminationMode::superpixel;
  spec.levels = {{0, IlluminationLevel::from_value(0.5)}, {1, IlluminationLevel::from_value(0.3)}};
  spec.regions = halves_labels(4, 6);
  const SamplePair p = apply_illumination(img, spec);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 6; ++x) {
      for (int c = 0; c < 3; ++c) {
        if (x < 3) {
          EXPECT_DOUBLE_EQ(p.low_light(y, x, c), 0.4);
          EXPECT_DOUBLE_EQ(p.attention(y, x, c), 0.4);
        } else {
          EXPECT_DOUBLE_EQ(p.low_light(y, x, c), 0.24);
          EXPECT_DOUBLE_EQ(p.attention(y, x, c), 0.56);
        }
      }
    }
  }
}

TEST(Local, MissingLevelIsAnError) {
  IlluminationSpec spec;
  spec.levels = {{0, IlluminationLevel::from_tenths(5)}};
  spec.regions = halves_labels(2, 2);
  EXPECT_THROW(apply_illumination(Image::constant(2, 2, 1, 0.5), spec), ArgumentError);
}

TEST(Local, RatioIsPiecewiseConstantAndRecorded) {
  const Image img = test::scene_image(48, 64, 3);
  const SuperpixelLabels labels = slic(img, {.k = 30});
  const SamplePair p = synthesize_local(img, labels, 1234);
  ASSERT_EQ(static_cast<int>(p.spec.levels.size()), labels.count());
  for (int y = 0; y < 48; ++y) {
    for (int x = 0; x < 64; ++x) {
      const double L = p.spec.levels.at(labels(y, x)).value();
      for (int c = 0; c < 3; ++c) {
        EXPECT_LE(p.low_light(y, x, c), img(y, x, c));
        EXPECT_GE(p.attention(y, x, c), 0.0);
        if (img(y, x, c) > 0.0) EXPECT_NEAR(p.low_light(y, x, c) / img(y, x, c), L, 1e-9);
      }
    }
  }
}

TEST(Local, DeterministicPerSeed) {
  const Image img = test::scene_image(32, 32, 5);
  const SuperpixelLabels labels = slic(img, {.k = 16});
  const SamplePair a = synthesize_local(img, labels, 9), b = synthesize_local(img, labels, 9);
  EXPECT_TRUE(a.low_light == b.low_light);
  EXPECT_TRUE(a.attention == b.attention);
  EXPECT_TRUE(a.spec.levels == b.spec.levels);
  EXPECT_FALSE(synthesize_local(img, labels, 10).spec.levels == a.spec.levels);
}

TEST(Global, FixedLevels) {
  const Image img = test::random_image(8, 9, 3, 2);
  const SamplePair one = synthesize_global(img, 1.0);
  EXPECT_TRUE(one.low_light == img);
  EXPECT_TRUE((one.attention.samples() == 0.0).all());

  const SamplePair dark = synthesize_global(img, 0.1);
  EXPECT_LE((dark.low_light.samples() - 0.1 * img.samples()).abs().maxCoeff(), 1e-15);
  EXPECT_LE((dark.attention.samples() - 0.9 * img.samples()).abs().maxCoeff(), 1e-15);
  EXPECT_THROW(synthesize_global(img, 0.25), ArgumentError);
}

TEST(Quadtree, FullSplitGivesSixteenLeaves) {
  const auto leaves = quadtree_leaves(64, 64, 7, {.max_depth = 2, .split_prob = 1.0});
  ASSERT_EQ(leaves.size(), 16u);
  for (const auto& l : leaves) {
    EXPECT_EQ(l.rect.height, 16);
    EXPECT_EQ(l.rect.width, 16);
  }
  const LabelRaster ids = region_map(leaves);
  EXPECT_EQ(ids.samples().minCoeff(), 0);
  EXPECT_EQ(ids.samples().maxCoeff(), 15);
}

TEST(Quadtree, DepthZeroIsGlobal) {
  const Image img = test::random_image(20, 30, 3, 3);
  const SamplePair p = synthesize_quadtree(img, 44, {.max_depth = 0, .split_prob = 1.0});
  ASSERT_EQ(p.spec.levels.size(), 1u);
  const double L = p.spec.levels.begin()->second.value();
  EXPECT_LE((p.low_light.samples() - L * img.samples()).abs().maxCoeff(), 1e-15);
}

TEST(Quadtree, LeavesTileOddFrames) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto leaves = quadtree_leaves(37, 53, seed, {.max_depth = 4, .split_prob = 0.6});
    std::int64_t area = 0;
    for (const auto& l : leaves) area += std::int64_t(l.rect.height) * l.rect.width;
    EXPECT_EQ(area, 37 * 53);
    EXPECT_NO_THROW(region_map(leaves));
  }
}

TEST(Reconstruct, IdentityAndClamp) {
  const Image img = test::random_image(5, 5, 3, 4);
  EXPECT_TRUE(reconstruct(img, FloatMap(5, 5, 3)) == img);
  const Image px = reconstruct(Image::constant(1, 1, 1, 0.9), FloatMap::constant(1, 1, 1, 0.3));
  EXPECT_EQ(px(0, 0), 1.0);
  EXPECT_THROW(reconstruct(img, FloatMap(5, 4, 3)), DimensionMismatch);
}

TEST(RoundTrip, AllModes) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Image img = test::random_image(33, 41, 3, s);
    const SamplePair modes[3] = {synthesize_local(img, slic(img, {.k = 20}), s),
                                 synthesize_quadtree(img, s), synthesize_global_random(img, s)};
    for (const auto& p : modes) {
      EXPECT_LE(round_trip_error(p), 1e-6);
      EXPECT_LE((reconstruct(p.low_light, p.attention).samples() - img.samples()).abs().maxCoeff(), 1e-6);
    }
  }
}

TEST(Crop, WindowsAreDeterministicAndInside) {
  const auto a = patch_windows(300, 500, 240, 5, 11);
  const auto b = patch_windows(300, 500, 240, 5, 11);
  EXPECT_EQ(a, b);
  for (const Rect& r : a) {
    EXPECT_GE(r.top, 0);
    EXPECT_GE(r.left, 0);
    EXPECT_LE(r.top + 240, 300);
    EXPECT_LE(r.left + 240, 500);
  }
  EXPECT_NE(patch_windows(300, 500, 240, 5, 12), a);
  EXPECT_TRUE(patch_windows(300, 500, 240, 0, 11).empty());
  EXPECT_THROW(patch_windows(200, 500, 240, 1, 11), ArgumentError);
}

TEST(Crop, PatchesKeepInvariantsAndProvenance) {
  const Image img = test::scene_image(80, 100, 6);
  const SuperpixelLabels labels = slic(img, {.k = 40});
  const SamplePair pair = synthesize_local(img, labels, 3);
  const auto patches = crop_pairs(pair, 32, 4, 99);
  ASSERT_EQ(patches.size(), 4u);
  const auto windows = patch_windows(80, 100, 32, 4, 99);
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const SamplePair& p = patches[i];
    EXPECT_EQ(p.ground_truth.height(), 32);
    EXPECT_LE(round_trip_error(p), 1e-6);
    ASSERT_TRUE(p.spec.window.has_value());
    EXPECT_EQ(*p.spec.window, windows[i]);
    EXPECT_EQ(p.spec.seed, 3u);
    const LabelRaster ids = region_map(p.spec.regions);
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        EXPECT_EQ(ids(y, x), labels(windows[i].top + y, windows[i].left + x));
        ASSERT_TRUE(p.spec.levels.count(ids(y, x)));
      }
    }
    // Rebuilding from the stored spec gives the same low-light patch.
    EXPECT_TRUE(apply_illumination(p.ground_truth, p.spec).low_light == p.low_light);
  }
  EXPECT_TRUE(crop_pairs(pair, 32, 0, 99).empty());
  EXPECT_THROW(crop_pairs(pair, 81, 1, 99), ArgumentError);
}

TEST(Crop, QuadtreeLeavesAreClipped) {
  const Image img = test::random_image(64, 64, 3, 8);
  const SamplePair pair = synthesize_quadtree(img, 5, {.max_depth = 3, .split_prob = 1.0});
  const SamplePair p = crop_pair(pair, {10, 20, 30, 30});
  EXPECT_TRUE(apply_illumination(p.ground_truth, p.spec).low_light == p.low_light);
}

TEST(Quantize, StoredPairRebuildsGroundTruth) {
  const Image img = test::random_image(16, 16, 3, 12);
  const SamplePair q = quantize_pair(synthesize_quadtree(img, 2), 16);
  EXPECT_LE(round_trip_error(q), 1e-12);
  EXPECT_TRUE(q.low_light == quantize(q.low_light, 16));
}

TEST(SpecJson, RoundTripsEveryGeometry) {
  const Image img = test::scene_image(40, 50, 9);
  const SamplePair local = synthesize_local(img, slic(img, {.k = 12}), 77);
  const SamplePair quad = synthesize_quadtree(img, 78);
  const SamplePair global = synthesize_global_random(img, 79);
  const SamplePair patch = crop_pair(local, {5, 6, 20, 20});
  for (const SamplePair* p : {&local, &quad, &global, &patch}) {
    const IlluminationSpec back = spec_from_json(nlohmann::json::parse(spec_to_json(p->spec).dump()));
    EXPECT_EQ(back.mode, p->spec.mode);
    EXPECT_EQ(back.seed, p->spec.seed);
    EXPECT_TRUE(back.levels == p->spec.levels);
    EXPECT_EQ(back.window, p->spec.window);
    EXPECT_TRUE(region_map(back.regions) == region_map(p->spec.regions));
    EXPECT_TRUE(apply_illumination(p->ground_truth, back).low_light == p->low_light);
  }
  EXPECT_THROW(spec_from_json(nlohmann::json::parse(R"({"mode":"bogus"})")), FormatError);
}

}  // namespace
}  // namespace dale
