#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dale {

// Bad caller input: out-of-range parameters, windows, sizes.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ChannelCountError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class DimensionMismatch : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Malformed file or stream. `offset` is the byte position where decoding
// stopped, when known.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what, std::size_t offset = npos)
      : std::runtime_error(offset == npos ? what : what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnsupportedFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Distribution fitting on degenerate samples.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dale
