#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "shadercanny/precision.hpp"

namespace shadercanny {

/// All channels of one texture coordinate. Unused channels are zero.
using Texel = std::array<float, 4>;

/// Non-owning read-only view over row-major interleaved texel storage.
struct TextureView {
  std::span<const float> values;
  int width = 0;
  int height = 0;
  int channels = 0;

  /// Fetch with clamp-to-edge addressing. Never reads out of bounds.
  Texel fetch_clamped(int x, int y) const noexcept {
    const int cx = x < 0 ? 0 : (x >= width ? width - 1 : x);
    const int cy = y < 0 ? 0 : (y >= height ? height - 1 : y);
    const float* p = values.data() +
                     (static_cast<std::size_t>(cy) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(cx)) *
                         static_cast<std::size_t>(channels);
    Texel t{};
    for (int c = 0; c < channels; ++c) t[c] = p[c];
    return t;
  }
};

/// Rectangular grid of texels stored at a fixed precision. Immutable once
/// built; every stored value is exactly representable in `precision()`.
class Texture2D {
 public:
  /// Quantizes `values` to `precision`. Throws InvalidInput on bad shape.
  Texture2D(int width, int height, int channels, Precision precision,
            std::vector<float> values);

  /// Zero-filled texture.
  Texture2D(int width, int height, int channels, Precision precision);

  /// Takes ownership of values that are already quantized to `precision`.
  static Texture2D adopt_quantized(int width, int height, int channels,
                                   Precision precision, std::vector<float> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  Precision precision() const noexcept { return precision_; }
  std::span<const float> values() const noexcept { return values_; }

  float at(int x, int y, int channel = 0) const;

  TextureView view() const noexcept {
    return TextureView{values_, width_, height_, channels_};
  }

  friend bool operator==(const Texture2D&, const Texture2D&) = default;

 private:
  struct Adopt {};
  Texture2D(Adopt, int width, int height, int channels, Precision precision,
            std::vector<float> values);

  int width_;
  int height_;
  int channels_;
  Precision precision_;
  std::vector<float> values_;
};

enum class PixelLayout { grey8, rgb888 };

inline constexpr int channel_count(PixelLayout layout) {
  return layout == PixelLayout::grey8 ? 1 : 3;
}

/// 8-bit image as captured or read from disk.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  PixelLayout layout = PixelLayout::grey8;
  std::vector<std::uint8_t> bytes;

  /// Throws InvalidInput unless dimensions are positive and the byte count
  /// matches width * height * channels.
  void validate() const;

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;
};

/// Maps bytes to [0,1] via v/255 and quantizes to `target`. grey8 gives a
/// one-channel texture, rgb888 a three-channel one.
Texture2D upload(const ImageBuffer& image, Precision target);

/// Converts one channel of a texture to bytes via round(255 * clamp(v, 0, 1)).
std::vector<std::uint8_t> to_bytes(const Texture2D& texture, int channel = 0);

/// Greyscale image from a single channel of `texture`.
ImageBuffer to_grey_image(const Texture2D& texture, int channel = 0);

}  // namespace shadercanny
