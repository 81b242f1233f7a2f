#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstring>
#include <string>

#include "dale/io.hpp"

namespace dale {
namespace {

struct ReadState {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
  std::string error;
  bool unsupported = false;

  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
};

void on_read(png_structp png, png_bytep out, png_size_t length) {
  auto* state = static_cast<ReadState*>(png_get_io_ptr(png));
  if (state->offset + length > state->bytes.size()) {
    state->offset = state->bytes.size();
    png_error(png, "unexpected end of PNG stream");
  }
  std::memcpy(out, state->bytes.data() + state->offset, length);
  state->offset += length;
}

void on_error(png_structp png, png_const_charp message) {
  auto* state = static_cast<ReadState*>(png_get_error_ptr(png));
  if (state->error.empty()) state->error = message;
  png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

// All C++ objects live in `state`, owned by the caller, so the longjmp out of
// libpng never skips a destructor in this frame.
bool read_png_into(png_structp png, png_infop info, ReadState& state) {
  if (setjmp(png_jmpbuf(png))) return false;

  png_set_read_fn(png, &state, on_read);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  state.bit_depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE || state.bit_depth < 8) {
    state.unsupported = true;
    state.error = "only 8/16-bit gray or RGB PNG is supported";
    return false;
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  state.width = static_cast<int>(png_get_image_width(png, info));
  state.height = static_cast<int>(png_get_image_height(png, info));
  state.channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  state.pixels.resize(stride * static_cast<std::size_t>(state.height));
  state.rows.resize(static_cast<std::size_t>(state.height));
  for (int r = 0; r < state.height; ++r) state.rows[r] = state.pixels.data() + stride * r;
  png_read_image(png, state.rows.data());
  png_read_end(png, nullptr);
  return true;
}

ReadState read_raw(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw FormatError("not a PNG stream: bad signature", 0);
  }
  ReadState state;
  state.bytes = bytes;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &state, on_error, on_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::bad_alloc();
  }
  const bool ok = read_png_into(png, info, state);
  png_destroy_read_struct(&png, &info, nullptr);
  if (!ok) {
    if (state.unsupported) throw UnsupportedFormatError(state.error, state.offset);
    throw FormatError("PNG decode failed: " + state.error, state.offset);
  }
  return state;
}

struct WriteState {
  Bytes out;
  std::string error;
};

void on_write(png_structp png, png_bytep data, png_size_t length) {
  auto* state = static_cast<WriteState*>(png_get_io_ptr(png));
  state->out.insert(state->out.end(), data, data + length);
}

void on_flush(png_structp) {}

void on_write_error(png_structp png, png_const_charp message) {
  auto* state = static_cast<WriteState*>(png_get_error_ptr(png));
  if (state->error.empty()) state->error = message;
  png_longjmp(png, 1);
}

bool write_png_from(png_structp png, png_infop info, WriteState& state, int width, int height,
                    int channels, int bit_depth, std::vector<png_bytep>& rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_write_fn(png, &state, on_write, on_flush);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  return true;
}

// `packed` holds big-endian samples, rows contiguous.
Bytes write_raw(std::vector<std::uint8_t>& packed, int width, int height, int channels, int bit_depth) {
  const std::size_t stride = static_cast<std::size_t>(width) * channels * (bit_depth / 8);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int r = 0; r < height; ++r) rows[r] = packed.data() + stride * r;

  WriteState state;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state, on_write_error, on_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::bad_alloc();
  }
  const bool ok = write_png_from(png, info, state, width, height, channels, bit_depth, rows);
  png_destroy_write_struct(&png, &info);
  if (!ok) throw std::runtime_error("PNG encode failed: " + state.error);
  return std::move(state.out);
}

}  // namespace

Image decode_png(std::span<const std::uint8_t> bytes) {
  ReadState raw = read_raw(bytes);
  const double max_code = raw.bit_depth == 16 ? 65535.0 : 255.0;
  Raster<double> out(raw.height, raw.width, raw.channels);
  auto& s = out.samples();
  const std::size_t n = static_cast<std::size_t>(out.size());
  if (raw.bit_depth == 16) {
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = double((unsigned(raw.pixels[2 * i]) << 8) | raw.pixels[2 * i + 1]) / max_code;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) s[i] = double(raw.pixels[i]) / max_code;
  }
  return Image(std::move(out));
}

Bytes encode_png(const Image& image, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw ArgumentError("PNG bit depth must be 8 or 16");
  const double max_code = bit_depth == 16 ? 65535.0 : 255.0;
  const auto& s = image.samples();
  const std::size_t n = static_cast<std::size_t>(s.size());
  std::vector<std::uint8_t> packed(n * (bit_depth / 8));
  for (std::size_t i = 0; i < n; ++i) {
    const auto code = static_cast<unsigned>(std::floor(s[i] * max_code + 0.5));
    if (bit_depth == 16) {
      packed[2 * i] = static_cast<std::uint8_t>(code >> 8);
      packed[2 * i + 1] = static_cast<std::uint8_t>(code & 0xff);
    } else {
      packed[i] = static_cast<std::uint8_t>(code);
    }
  }
  return write_raw(packed, image.width(), image.height(), image.channels(), bit_depth);
}

Image quantize(const Image& image, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw ArgumentError("PNG bit depth must be 8 or 16");
  const double max_code = bit_depth == 16 ? 65535.0 : 255.0;
  Raster<double> out = image.raster();
  for (auto& v : out.samples()) v = std::floor(v * max_code + 0.5) / max_code;
  return Image(std::move(out));
}

Bytes encode_png_gray16(const Raster<std::uint16_t>& codes) {
  if (codes.channels() != 1) throw ChannelCountError("label PNG must be single-channel");
  const std::size_t n = static_cast<std::size_t>(codes.size());
  std::vector<std::uint8_t> packed(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    packed[2 * i] = static_cast<std::uint8_t>(codes.samples()[i] >> 8);
    packed[2 * i + 1] = static_cast<std::uint8_t>(codes.samples()[i] & 0xff);
  }
  return write_raw(packed, codes.width(), codes.height(), 1, 16);
}

Raster<std::uint16_t> decode_png_gray16(std::span<const std::uint8_t> bytes) {
  ReadState raw = read_raw(bytes);
  if (raw.bit_depth != 16 || raw.channels != 1) {
    throw UnsupportedFormatError("expected a 16-bit gray PNG");
  }
  Raster<std::uint16_t> out(raw.height, raw.width, 1);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out.samples()[i] = static_cast<std::uint16_t>((raw.pixels[2 * i] << 8) | raw.pixels[2 * i + 1]);
  }
  return out;
}

Image read_png(const std::filesystem::path& path) { return decode_png(read_file(path)); }

void write_png(const Image& image, const std::filesystem::path& path, int bit_depth) {
  write_file(path, encode_png(image, bit_depth));
}

}  // namespace dale
