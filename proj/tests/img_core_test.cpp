#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "dale/color.hpp"
#include "dale/io.hpp"
#include "dale/resample.hpp"
#include "support.hpp"

namespace dale {
namespace {

// Encoded by an independent PNG writer (Pillow).
const Bytes kRgbPixel = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52, 0x00, 0x00,
    0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x02, 0x00, 0x00, 0x00, 0x90, 0x77, 0x53, 0xde, 0x00, 0x00, 0x00,
    0x0c, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0xf8, 0xcf, 0xd0, 0x00, 0x00, 0x03, 0x81, 0x01, 0x80, 0xa2,
    0xad, 0x96, 0x81, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};
const Bytes kGrayZero2x2 = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52, 0x00, 0x00,
    0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x00, 0x00, 0x00, 0x00, 0x57, 0xdd, 0x52, 0xf8, 0x00, 0x00, 0x00,
    0x0e, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x60, 0x60, 0x60, 0x60, 0x60, 0x00, 0x00, 0x00, 0x06, 0x00,
    0x01, 0x72, 0x82, 0x99, 0xea, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};
const Bytes kGray16Half = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52, 0x00, 0x00,
    0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x10, 0x00, 0x00, 0x00, 0x00, 0x6a, 0xee, 0x47, 0x16, 0x00, 0x00, 0x00,
    0x0b, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x68, 0x60, 0x00, 0x00, 0x01, 0x03, 0x00, 0x81, 0x3e, 0x4c,
    0xc5, 0x93, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

TEST(Png, DecodesRgbPixel) {
  const Image img = decode_png(kRgbPixel);
  ASSERT_EQ(img.channels(), 3);
  EXPECT_EQ(img(0, 0, 0), 1.0);
  EXPECT_EQ(img(0, 0, 1), 0.0);
  EXPECT_EQ(img(0, 0, 2), 128.0 / 255.0);
}

TEST(Png, DecodesGrayZero) {
  const Image img = decode_png(kGrayZero2x2);
  EXPECT_EQ(img.height(), 2);
  EXPECT_EQ(img.width(), 2);
  EXPECT_EQ(img.channels(), 1);
  EXPECT_TRUE((img.samples() == 0.0).all());
}

TEST(Png, Decodes16BitGray) {
  const Image img = decode_png(kGray16Half);
  EXPECT_EQ(img(0, 0), 32768.0 / 65535.0);
  EXPECT_NEAR(img(0, 0), 0.50000763, 1e-8);
}

TEST(Png, HalfRoundsUpAtDepth8) {
  const Bytes png = encode_png(Image::constant(1, 1, 1, 0.5), 8);
  EXPECT_EQ(decode_png(png)(0, 0), 128.0 / 255.0);
  EXPECT_EQ(quantize(Image::constant(1, 1, 1, 0.5), 8)(0, 0), 128.0 / 255.0);
}

TEST(Png, ZeroImageEncodesZeros) {
  const Image back = decode_png(encode_png(Image::constant(3, 5, 3, 0.0), 16));
  EXPECT_TRUE((back.samples() == 0.0).all());
}

TEST(Png, RoundTripWithinHalfStep) {
  for (int depth : {8, 16}) {
    for (int c : {1, 3}) {
      const Image img = test::random_image(17, 23, c, 100 + depth + c);
      const Image back = decode_png(encode_png(img, depth));
      ASSERT_TRUE(back.same_shape(img));
      const double bound = 1.0 / (2.0 * ((1 << depth) - 1));
      EXPECT_LE((back.samples() - img.samples()).abs().maxCoeff(), bound + 1e-15);
      EXPECT_TRUE(quantize(img, depth) == back);
    }
  }
}

TEST(Png, EightBitSamplesSurvive16BitStorage) {
  const Image img = quantize(test::random_image(8, 8, 3, 5), 8);
  EXPECT_TRUE(decode_png(encode_png(img, 16)) == img);
}

TEST(Png, BadSignatureReportsOffsetZero) {
  Bytes junk(32, 0x42);
  try {
    decode_png(junk);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
}

TEST(Png, TruncatedStreamReportsOffset) {
  Bytes cut(kRgbPixel.begin(), kRgbPixel.begin() + 45);
  try {
    decode_png(cut);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(e.offset(), FormatError::npos);
    EXPECT_LE(e.offset(), cut.size());
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
}

TEST(Png, CorruptCrcIsRejected) {
  Bytes bad = kRgbPixel;
  bad[30] ^= 0xff;  // inside the IHDR CRC
  EXPECT_THROW(decode_png(bad), FormatError);
}

TEST(Png, Gray16LabelsRoundTrip) {
  Raster<std::uint16_t> codes(3, 4, 1);
  for (Eigen::Index i = 0; i < codes.size(); ++i) codes.samples()[i] = static_cast<std::uint16_t>(i * 5000);
  EXPECT_TRUE(decode_png_gray16(encode_png_gray16(codes)) == codes);
}

TEST(Pfm, GoldenBytes) {
  const Bytes bytes = encode_pfm(FloatMap::constant(1, 1, 1, 0.25));
  const std::string header = "Pf\n1 1\n-1.0\n";
  ASSERT_EQ(bytes.size(), header.size() + 4);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + header.size()), header);
  const std::uint8_t payload[4] = {0x00, 0x00, 0x80, 0x3e};  // 0.25f little-endian
  EXPECT_EQ(std::memcmp(bytes.data() + header.size(), payload, 4), 0);
}

TEST(Pfm, RowsStoredBottomToTop) {
  FloatMap m(2, 1, 1);
  m(0, 0) = 1.0;
  m(1, 0) = 2.0;
  const Bytes bytes = encode_pfm(m);
  float first;
  std::memcpy(&first, bytes.data() + std::string("Pf\n1 2\n-1.0\n").size(), 4);
  EXPECT_EQ(first, 2.0f);
}

TEST(Pfm, RoundTripIsBitIdentical) {
  for (int c : {1, 3}) {
    FloatMap m(9, 13, c);
    std::mt19937_64 rng(c);
    std::normal_distribution<float> n(0.0f, 3.0f);
    for (auto& v : m.samples()) v = n(rng);  // float32-representable
    EXPECT_TRUE(decode_pfm(encode_pfm(m)) == m);
  }
}

TEST(Pfm, TruncatedPayloadIsRejected) {
  Bytes bytes = encode_pfm(FloatMap::constant(2, 2, 3, 1.0));
  bytes.resize(bytes.size() - 3);
  EXPECT_THROW(decode_pfm(bytes), FormatError);
}

TEST(Pfm, HeaderMismatchIsRejected) {
  const std::string text = "P5\n1 1\n-1.0\n\0\0\0\0";
  EXPECT_THROW(decode_pfm(Bytes(text.begin(), text.end())), FormatError);
  const std::string bad_dim = "Pf\n1 x\n-1.0\n";
  EXPECT_THROW(decode_pfm(Bytes(bad_dim.begin(), bad_dim.end())), FormatError);
}

TEST(Pfm, FileRoundTrip) {
  test::TempDir dir("pfm");
  const FloatMap m = FloatMap::constant(4, 3, 3, -0.125);
  write_pfm(m, dir.path() / "a.pfm");
  EXPECT_TRUE(read_pfm(dir.path() / "a.pfm") == m);
}

// sRGB gray -> L* computed straight from the reference formulas.
double gray_lightness_oracle(double v) {
  const double lin = v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
  const double t = lin;  // Y / Yn for a neutral color
  const double eps = 216.0 / 24389.0, kappa = 24389.0 / 27.0;
  const double f = t > eps ? std::cbrt(t) : (kappa * t + 16.0) / 116.0;
  return 116.0 * f - 16.0;
}

TEST(Lab, WhiteBlackAndGray) {
  const LabImage white = rgb_to_lab(Image::constant(1, 1, 3, 1.0));
  EXPECT_NEAR(white.lightness(0, 0), 100.0, 1e-9);
  EXPECT_LT(std::abs(white.a(0, 0)), 1e-3);
  EXPECT_LT(std::abs(white.b(0, 0)), 1e-3);

  const LabImage black = rgb_to_lab(Image::constant(1, 1, 3, 0.0));
  EXPECT_NEAR(black.lightness(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(black.a(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(black.b(0, 0), 0.0, 1e-12);

  const LabImage gray = rgb_to_lab(Image::constant(1, 1, 3, 0.5));
  EXPECT_NEAR(gray.lightness(0, 0), gray_lightness_oracle(0.5), 1e-9);
  EXPECT_NEAR(gray.lightness(0, 0), 53.39, 0.005);
}

TEST(Lab, AnyGrayIsNeutral) {
  for (int i = 0; i <= 100; ++i) {
    const double v = i / 100.0;
    const LabImage lab = rgb_to_lab(Image::constant(1, 1, 3, v));
    EXPECT_LT(std::abs(lab.a(0, 0)), 1e-3) << v;
    EXPECT_LT(std::abs(lab.b(0, 0)), 1e-3) << v;
    EXPECT_NEAR(lab.lightness(0, 0), gray_lightness_oracle(v), 1e-9) << v;
  }
}

TEST(Lab, RejectsGray) { EXPECT_THROW(rgb_to_lab(Image::constant(2, 2, 1, 0.3)), ChannelCountError); }

TEST(Lightness, MaxOverChannels) {
  Raster<double> r(1, 1, 3);
  r(0, 0, 0) = 0.2;
  r(0, 0, 1) = 0.9;
  r(0, 0, 2) = 0.4;
  EXPECT_EQ(lightness(Image(r))(0, 0), 0.9);

  const Image gray = test::random_image(5, 6, 1, 3);
  EXPECT_TRUE(lightness(gray) == gray.raster());

  const Image rgb = test::random_image(7, 4, 3, 4);
  const FloatMap l = lightness(rgb);
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 4; ++x) {
      for (int c = 0; c < 3; ++c) EXPECT_GE(l(y, x), rgb(y, x, c));
    }
  }
}

TEST(Resize, IdentityAndConstant) {
  const Image img = test::random_image(6, 9, 3, 8);
  EXPECT_TRUE(resize_nearest(img, 6, 9) == img);
  const Image c = Image::constant(5, 5, 1, 0.3);
  EXPECT_TRUE(resize_nearest(c, 13, 2) == Image::constant(13, 2, 1, 0.3));
  EXPECT_THROW(resize_nearest(img, 0, 3), ArgumentError);
}

TEST(Resize, CheckerboardHalving) {
  Raster<double> board(4, 4, 1);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) board(y, x) = ((y + x) % 2) ? 1.0 : 0.0;
  }
  // Cell i covers source rows/cols [2i, 2i+2); its centre 2i + 1 picks the sample.
  const Raster<double> half = resize_nearest(board, 2, 2);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 2; ++x) EXPECT_EQ(half(y, x), board(2 * y + 1, 2 * x + 1));
  }
}

TEST(Resize, ValuesComeFromSource) {
  const Image img = test::random_image(7, 11, 1, 9);
  const Image out = resize_nearest(img, 19, 3);
  for (double v : out.samples()) EXPECT_TRUE((img.samples() == v).any());
}

TEST(Crop, FullFrameAndSinglePixel) {
  const Image img = test::random_image(5, 7, 3, 10);
  EXPECT_TRUE(crop(img, 0, 0, 5, 7) == img);
  const Image px = crop(img, 3, 4, 1, 1);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(px(0, 0, c), img(3, 4, c));
  EXPECT_THROW(crop(img, 4, 0, 2, 1), ArgumentError);
  EXPECT_THROW(crop(img, -1, 0, 1, 1), ArgumentError);
}

TEST(Crop, OverlappingCropsAgree) {
  const Image img = test::random_image(20, 20, 3, 11);
  const Image a = crop(img, 2, 3, 10, 10);
  const Image b = crop(img, 6, 8, 10, 10);
  for (int y = 6; y < 12; ++y) {
    for (int x = 8; x < 13; ++x) {
      for (int c = 0; c < 3; ++c) EXPECT_EQ(a(y - 2, x - 3, c), b(y - 6, x - 8, c));
    }
  }
}

TEST(ImageType, RejectsOutOfRangeAndBadChannels) {
  EXPECT_THROW(Image::constant(1, 1, 3, 1.5), ArgumentError);
  EXPECT_THROW(Image::constant(1, 1, 2, 0.5), ChannelCountError);
  EXPECT_THROW(Raster<double>(0, 3, 1), ArgumentError);
}

}  // namespace
}  // namespace dale
