#include "shadercanny/texture.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shadercanny/errors.hpp"

namespace shadercanny {
namespace {

void check_shape(int width, int height, int channels, std::size_t count) {
  if (width < 1 || height < 1) {
    throw InvalidInput("texture dimensions must be positive, got " +
                       std::to_string(width) + "x" + std::to_string(height));
  }
  if (channels < 1 || channels > 4) {
    throw InvalidInput("texture channel count must be 1..4, got " +
                       std::to_string(channels));
  }
  const auto expected = static_cast<std::size_t>(width) *
                        static_cast<std::size_t>(height) *
                        static_cast<std::size_t>(channels);
  if (count != expected) {
    throw InvalidInput("texel count " + std::to_string(count) + " does not match " +
                       std::to_string(expected));
  }
}

std::size_t texel_count(int width, int height, int channels) {
  if (width < 1 || height < 1 || channels < 1) return 0;
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
         static_cast<std::size_t>(channels);
}

}  // namespace

Texture2D::Texture2D(int width, int height, int channels, Precision precision,
                     std::vector<float> values)
    : Texture2D(Adopt{}, width, height, channels, precision, std::move(values)) {
  for (float& v : values_) v = quantize(v, precision_);
}

Texture2D::Texture2D(int width, int height, int channels, Precision precision)
    : Texture2D(Adopt{}, width, height, channels, precision,
                std::vector<float>(texel_count(width, height, channels), 0.0f)) {}

Texture2D::Texture2D(Adopt, int width, int height, int channels, Precision precision,
                     std::vector<float> values)
    : width_(width),
      height_(height),
      channels_(channels),
      precision_(precision),
      values_(std::move(values)) {
  check_shape(width_, height_, channels_, values_.size());
}

Texture2D Texture2D::adopt_quantized(int width, int height, int channels,
                                     Precision precision, std::vector<float> values) {
  return Texture2D(Adopt{}, width, height, channels, precision, std::move(values));
}

float Texture2D::at(int x, int y, int channel) const {
  if (x < 0 || x >= width_ || y < 0 || y >= height_ || channel < 0 ||
      channel >= channels_) {
    throw InvalidInput("texel (" + std::to_string(x) + "," + std::to_string(y) +
                       ") channel " + std::to_string(channel) + " out of range");
  }
  return values_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + channel];
}

void ImageBuffer::validate() const {
  if (width < 1 || height < 1) {
    throw InvalidInput("image dimensions must be positive, got " +
                       std::to_string(width) + "x" + std::to_string(height));
  }
  const auto expected = static_cast<std::size_t>(width) *
                        static_cast<std::size_t>(height) *
                        static_cast<std::size_t>(channel_count(layout));
  if (bytes.size() != expected) {
    throw InvalidInput("image has " + std::to_string(bytes.size()) +
                       " bytes, expected " + std::to_string(expected));
  }
}

Texture2D upload(const ImageBuffer& image, Precision target) {
  image.validate();
  // 256-entry table: every byte maps to the same quantized texel value.
  std::array<float, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    lut[v] = static_cast<float>(quantize(static_cast<double>(v) / 255.0, target));
  }
  std::vector<float> values(image.bytes.size());
  std::transform(image.bytes.begin(), image.bytes.end(), values.begin(),
                 [&lut](std::uint8_t b) { return lut[b]; });
  return Texture2D::adopt_quantized(image.width, image.height,
                                    channel_count(image.layout), target,
                                    std::move(values));
}

std::vector<std::uint8_t> to_bytes(const Texture2D& texture, int channel) {
  if (channel < 0 || channel >= texture.channels()) {
    throw InvalidInput("channel " + std::to_string(channel) + " out of range");
  }
  const auto pixels = static_cast<std::size_t>(texture.width()) *
                      static_cast<std::size_t>(texture.height());
  std::vector<std::uint8_t> out(pixels);
  const auto values = texture.values();
  const auto stride = static_cast<std::size_t>(texture.channels());
  for (std::size_t i = 0; i < pixels; ++i) {
    const float v = values[i * stride + static_cast<std::size_t>(channel)];
    const float clamped = std::isnan(v) ? 0.0f : std::clamp(v, 0.0f, 1.0f);
    out[i] = static_cast<std::uint8_t>(std::lround(255.0f * clamped));
  }
  return out;
}

ImageBuffer to_grey_image(const Texture2D& texture, int channel) {
  return ImageBuffer{texture.width(), texture.height(), PixelLayout::grey8,
                     to_bytes(texture, channel)};
}

}  // namespace shadercanny
