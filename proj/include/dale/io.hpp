#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dale/raster.hpp"

namespace dale {

using Bytes = std::vector<std::uint8_t>;

// PNG, 8/16-bit gray or RGB. Alpha is dropped; palette and sub-byte depths
// raise UnsupportedFormatError, corrupt streams raise FormatError.
Image decode_png(std::span<const std::uint8_t> bytes);

// Quantizes with round-half-up: stored = floor(v * (2^depth - 1) + 0.5).
Bytes encode_png(const Image& image, int bit_depth = 8);

// Values exactly as decode_png(encode_png(image, bit_depth)) would return them.
Image quantize(const Image& image, int bit_depth);

// Raw 16-bit gray PNG of arbitrary integer codes (label maps).
Bytes encode_png_gray16(const Raster<std::uint16_t>& codes);
Raster<std::uint16_t> decode_png_gray16(std::span<const std::uint8_t> bytes);

Image read_png(const std::filesystem::path& path);
void write_png(const Image& image, const std::filesystem::path& path, int bit_depth = 8);

// Portable Float Map: "Pf" (gray) or "PF" (RGB), "W H", scale "-1.0"
// (little-endian), float32 rows stored bottom to top.
Bytes encode_pfm(const FloatMap& map);
FloatMap decode_pfm(std::span<const std::uint8_t> bytes);
void write_pfm(const FloatMap& map, const std::filesystem::path& path);
FloatMap read_pfm(const std::filesystem::path& path);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace dale
