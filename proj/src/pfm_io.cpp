#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>

#include "dale/io.hpp"

namespace dale {
namespace {

std::uint32_t load_u32(const std::uint8_t* p, bool little_endian) {
  return little_endian ? (std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
                          std::uint32_t(p[3]) << 24)
                       : (std::uint32_t(p[3]) | std::uint32_t(p[2]) << 8 | std::uint32_t(p[1]) << 16 |
                          std::uint32_t(p[0]) << 24);
}

// Reads one whitespace-delimited header token, then exactly one separator.
class HeaderCursor {
 public:
  explicit HeaderCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string_view token() {
    while (pos_ < bytes_.size() && is_space(bytes_[pos_])) ++pos_;
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !is_space(bytes_[pos_])) ++pos_;
    if (start == pos_) throw FormatError("PFM header truncated", pos_);
    std::string_view tok(reinterpret_cast<const char*>(bytes_.data()) + start, pos_ - start);
    if (pos_ >= bytes_.size()) throw FormatError("PFM header truncated", pos_);
    ++pos_;
    return tok;
  }

  std::size_t position() const { return pos_; }

 private:
  static bool is_space(std::uint8_t c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

int parse_dimension(std::string_view tok, std::size_t offset) {
  int value = 0;
  auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || end != tok.data() + tok.size() || value < 1) {
    throw FormatError("bad PFM dimension '" + std::string(tok) + "'", offset);
  }
  return value;
}

}  // namespace

Bytes encode_pfm(const FloatMap& map) {
  if (map.channels() != 1 && map.channels() != 3) {
    throw ChannelCountError("PFM supports 1 or 3 channels");
  }
  const std::string header = std::string(map.channels() == 3 ? "PF" : "Pf") + "\n" +
                             std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n-1.0\n";
  Bytes out(header.begin(), header.end());
  out.reserve(out.size() + 4 * static_cast<std::size_t>(map.size()));
  for (int r = map.height() - 1; r >= 0; --r) {
    for (int c = 0; c < map.width(); ++c) {
      for (int k = 0; k < map.channels(); ++k) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(map(r, c, k)));
        for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
      }
    }
  }
  return out;
}

FloatMap decode_pfm(std::span<const std::uint8_t> bytes) {
  HeaderCursor cursor(bytes);
  const std::string_view magic = cursor.token();
  int channels = 0;
  if (magic == "PF") {
    channels = 3;
  } else if (magic == "Pf") {
    channels = 1;
  } else {
    throw FormatError("bad PFM magic '" + std::string(magic) + "'", 0);
  }
  const int width = parse_dimension(cursor.token(), cursor.position());
  const int height = parse_dimension(cursor.token(), cursor.position());
  const std::string scale_tok(cursor.token());
  double scale = 0.0;
  try {
    scale = std::stod(scale_tok);
  } catch (const std::exception&) {
    throw FormatError("bad PFM scale '" + scale_tok + "'", cursor.position());
  }
  if (scale == 0.0) throw FormatError("PFM scale must be nonzero", cursor.position());
  const bool little_endian = scale < 0.0;

  const std::size_t start = cursor.position();
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - start < 4 * count) {
    throw FormatError("PFM payload truncated: need " + std::to_string(4 * count) + " bytes", bytes.size());
  }
  FloatMap out(height, width, channels);
  const std::uint8_t* p = bytes.data() + start;
  for (int r = height - 1; r >= 0; --r) {
    for (int c = 0; c < width; ++c) {
      for (int k = 0; k < channels; ++k, p += 4) {
        const float v = std::bit_cast<float>(load_u32(p, little_endian));
        if (!std::isfinite(v)) {
          throw FormatError("PFM sample is not finite", static_cast<std::size_t>(p - bytes.data()));
        }
        out(r, c, k) = v;
      }
    }
  }
  return out;
}

void write_pfm(const FloatMap& map, const std::filesystem::path& path) { write_file(path, encode_pfm(map)); }

FloatMap read_pfm(const std::filesystem::path& path) { return decode_pfm(read_file(path)); }

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

// Writes to a sibling temp file, then renames over the target.
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace dale
