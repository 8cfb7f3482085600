#include "shadercanny/reference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

#include "shadercanny/errors.hpp"

namespace shadercanny::reference {
namespace {

constexpr float kLuma[3] = {0.299f, 0.587f, 0.114f};

/// Clamp-to-edge coordinates, spelled out with conditionals.
Texel fetch_branchy(Sampler& s, const int width, const int height, int x, int y) {
  if (x < 0) {
    x = 0;
  } else if (x > width - 1) {
    x = width - 1;
  }
  if (y < 0) {
    y = 0;
  } else if (y > height - 1) {
    y = height - 1;
  }
  return s.fetch(0, x, y);
}

PassKernel named(std::string_view name, int channels, Precision storage, int radius,
                 KernelBody body) {
  PassKernel k;
  k.name = std::string(name) + " (branchy)";
  k.output_channels = channels;
  k.output_precision = storage;
  k.footprint_radius = radius;
  k.body = std::move(body);
  return k;
}

}  // namespace

Grid::Grid(int w, int h, float fill)
    : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

float Grid::clamped(int x, int y) const {
  if (x < 0) x = 0;
  if (x >= width) x = width - 1;
  if (y < 0) y = 0;
  if (y >= height) y = height - 1;
  return at(x, y);
}

Kernel2D Kernel2D::outer(const std::vector<float>& column, const std::vector<float>& row) {
  Kernel2D k;
  k.width = static_cast<int>(row.size());
  k.height = static_cast<int>(column.size());
  k.weights.clear();
  for (float c : column) {
    for (float r : row) k.weights.push_back(c * r);
  }
  return k;
}

std::size_t BinaryEdgeMap::count() const {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

Direction direction_oracle(double gx, double gy) {
  if (gx == 0.0 && gy == 0.0) {
    throw InvalidInput("direction of a zero gradient is undefined");
  }
  double degrees = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
  if (degrees < -22.5) degrees += 360.0;
  // degrees now in [-22.5, 337.5]; 337.5 itself can only come from rounding.
  if (degrees < 22.5) return {1, 0};
  if (degrees < 67.5) return {1, 1};
  if (degrees < 112.5) return {0, 1};
  if (degrees < 157.5) return {-1, 1};
  if (degrees < 202.5) return {-1, 0};
  if (degrees < 247.5) return {-1, -1};
  if (degrees < 292.5) return {0, -1};
  if (degrees < 337.5) return {1, -1};
  return {1, 0};
}

Grid convolve2d_reference(const Grid& src, const Kernel2D& kernel) {
  if (kernel.width % 2 == 0 || kernel.height % 2 == 0 || kernel.width < 1 || kernel.height < 1) {
    throw InvalidInput("kernel dimensions must be odd, got " + std::to_string(kernel.width) +
                       "x" + std::to_string(kernel.height));
  }
  if (kernel.weights.size() !=
      static_cast<std::size_t>(kernel.width) * static_cast<std::size_t>(kernel.height)) {
    throw InvalidInput("kernel weight count does not match its dimensions");
  }
  const int rx = kernel.width / 2;
  const int ry = kernel.height / 2;
  Grid out(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      float sum = 0.0f;
      for (int j = -ry; j <= ry; ++j) {
        for (int i = -rx; i <= rx; ++i) {
          sum += kernel.weights[static_cast<std::size_t>((j + ry) * kernel.width + (i + rx))] *
                 src.clamped(x + i, y + j);
        }
      }
      out.at(x, y) = sum;
    }
  }
  return out;
}

ClassicStages classic_canny_stages(const Grid& grey, const CannyParams& params) {
  params.validate();
  const auto weights = binomial_weights(params.kernel_size);
  ClassicStages st;
  st.smoothed = convolve2d_reference(grey, Kernel2D::outer(weights, weights));

  const int w = grey.width;
  const int h = grey.height;
  st.magnitude = Grid(w, h);
  std::vector<Direction> direction(static_cast<std::size_t>(w) * h);
  std::vector<bool> flat(static_cast<std::size_t>(w) * h, false);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Grid& s = st.smoothed;
      const float gx = ((s.clamped(x + 1, y - 1) + 2.0f * s.clamped(x + 1, y) +
                         s.clamped(x + 1, y + 1)) -
                        (s.clamped(x - 1, y - 1) + 2.0f * s.clamped(x - 1, y) +
                         s.clamped(x - 1, y + 1))) *
                       0.25f;
      const float gy = ((s.clamped(x - 1, y + 1) + 2.0f * s.clamped(x, y + 1) +
                         s.clamped(x + 1, y + 1)) -
                        (s.clamped(x - 1, y - 1) + 2.0f * s.clamped(x, y - 1) +
                         s.clamped(x + 1, y - 1))) *
                       0.25f;
      float m;
      if (params.magnitude_mode == MagnitudeMode::exact) {
        m = std::sqrt(gx * gx + gy * gy);
      } else {
        m = std::fabs(gx) + std::fabs(gy);
      }
      st.magnitude.at(x, y) = m;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (gx == 0.0f && gy == 0.0f) {
        flat[i] = true;
      } else {
        direction[i] = direction_oracle(gx, gy);
      }
    }
  }

  const float low = static_cast<float>(params.low_threshold);
  const float high = static_cast<float>(params.high_threshold);
  st.suppressed = Grid(w, h);
  st.strong = BinaryEdgeMap{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 0)};
  st.candidates = st.strong;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (flat[i]) continue;
      const Direction d = direction[i];
      const float m = st.magnitude.at(x, y);
      const float ahead = st.magnitude.clamped(x + d.dx, y + d.dy);
      const float behind = st.magnitude.clamped(x - d.dx, y - d.dy);
      if (m >= ahead && m >= behind) {
        st.suppressed.at(x, y) = m;
        if (m >= high) st.strong.bits[i] = 1;
        if (m > low) st.candidates.bits[i] = 1;
      }
    }
  }

  // Breadth-first growth from strong pixels through candidates.
  st.edges = st.strong;
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (st.strong.at(x, y)) queue.emplace_back(x, y);
    }
  }
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    for (int j = -1; j <= 1; ++j) {
      for (int i = -1; i <= 1; ++i) {
        const int nx = x + i;
        const int ny = y + j;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
        if (st.candidates.bits[n] && !st.edges.bits[n]) {
          st.edges.bits[n] = 1;
          queue.emplace_back(nx, ny);
        }
      }
    }
  }
  return st;
}

BinaryEdgeMap classic_canny(const Grid& grey, const CannyParams& params) {
  return classic_canny_stages(grey, params).edges;
}

Grid grid_from_texture(const Texture2D& texture, int channel) {
  Grid g(texture.width(), texture.height());
  for (int y = 0; y < texture.height(); ++y) {
    for (int x = 0; x < texture.width(); ++x) g.at(x, y) = texture.at(x, y, channel);
  }
  return g;
}

Grid grid_from_image(const ImageBuffer& image) {
  image.validate();
  Grid g(image.width, image.height);
  const std::size_t pixels = g.values.size();
  for (std::size_t i = 0; i < pixels; ++i) {
    if (image.layout == PixelLayout::grey8) {
      g.values[i] = static_cast<float>(image.bytes[i] / 255.0);
    } else {
      float sum = 0.0f;
      for (int c = 0; c < 3; ++c) {
        sum += kLuma[c] * static_cast<float>(image.bytes[i * 3 + static_cast<std::size_t>(c)] / 255.0);
      }
      g.values[i] = sum;
    }
  }
  return g;
}

BinaryEdgeMap edge_map_from_image(const ImageBuffer& image) {
  image.validate();
  BinaryEdgeMap map{image.width, image.height, {}};
  const int stride = channel_count(image.layout);
  map.bits.resize(static_cast<std::size_t>(image.width) * image.height);
  for (std::size_t i = 0; i < map.bits.size(); ++i) {
    map.bits[i] = image.bytes[i * static_cast<std::size_t>(stride)] != 0 ? 1 : 0;
  }
  return map;
}

BinaryEdgeMap edge_map_from_texture(const Texture2D& texture, int channel) {
  BinaryEdgeMap map{texture.width(), texture.height(), {}};
  map.bits.resize(static_cast<std::size_t>(texture.width()) * texture.height());
  for (int y = 0; y < texture.height(); ++y) {
    for (int x = 0; x < texture.width(); ++x) {
      map.bits[static_cast<std::size_t>(y) * texture.width() + x] =
          texture.at(x, y, channel) > 0.0f ? 1 : 0;
    }
  }
  return map;
}

namespace branchy {

PassKernel gaussian(Axis axis, int kernel_size, Precision storage) {
  const std::vector<float> weights = binomial_weights(kernel_size);
  const int radius = kernel_size / 2;
  return named(axis == Axis::x ? kGaussianXLabel : kGaussianYLabel, 1, storage, radius,
               [weights, radius, axis](Sampler& s, int x, int y) -> Texel {
                 float sum = 0.0f;
                 for (int i = -radius; i <= radius; ++i) {
                   int sx = x;
                   int sy = y;
                   if (axis == Axis::x) {
                     sx += i;
                   } else {
                     sy += i;
                   }
                   sum += weights[static_cast<std::size_t>(i + radius)] *
                          fetch_branchy(s, s.width(0), s.height(0), sx, sy)[0];
                 }
                 return {sum, 0.0f, 0.0f, 0.0f};
               });
}

PassKernel gradient(MagnitudeMode mode, Precision storage) {
  return named(kGradientLabel, 3, storage, 1, [mode](Sampler& s, int x, int y) -> Texel {
    const int w = s.width(0);
    const int h = s.height(0);
    float p[3][3];
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) p[j][i] = fetch_branchy(s, w, h, x + i - 1, y + j - 1)[0];
    }
    const float gx =
        ((p[0][2] + 2.0f * p[1][2] + p[2][2]) - (p[0][0] + 2.0f * p[1][0] + p[2][0])) * 0.25f;
    const float gy =
        ((p[2][0] + 2.0f * p[2][1] + p[2][2]) - (p[0][0] + 2.0f * p[0][1] + p[0][2])) * 0.25f;
    float magnitude;
    if (mode == MagnitudeMode::exact) {
      magnitude = std::sqrt(gx * gx + gy * gy);
    } else {
      magnitude = std::fabs(gx) + std::fabs(gy);
    }
    Direction d{1, 0};
    if (gx != 0.0f || gy != 0.0f) d = direction_oracle(gx, gy);
    return {magnitude, static_cast<float>(d.dx), static_cast<float>(d.dy), 0.0f};
  });
}

PassKernel nms_threshold(float low, float high, Precision storage) {
  return named(kNonMaxLabel, 1, storage, 1, [low, high](Sampler& s, int x, int y) -> Texel {
    const int w = s.width(0);
    const int h = s.height(0);
    const Texel center = fetch_branchy(s, w, h, x, y);
    const int dx = static_cast<int>(center[1]);
    const int dy = static_cast<int>(center[2]);
    const float m = center[0];
    const float ahead = fetch_branchy(s, w, h, x + dx, y + dy)[0];
    const float behind = fetch_branchy(s, w, h, x - dx, y - dy)[0];
    float survivor = 0.0f;
    if (m >= ahead && m >= behind) survivor = m;
    float strength;
    if (survivor <= low) {
      strength = 0.0f;
    } else if (survivor >= high) {
      strength = 1.0f;
    } else {
      const float t = (survivor - low) / (high - low);
      strength = t * t * (3.0f - 2.0f * t);
    }
    return {strength, 0.0f, 0.0f, 0.0f};
  });
}

PassKernel weak_pixels(Precision storage) {
  return named(kWeakPixelsLabel, 1, storage, 1, [](Sampler& s, int x, int y) -> Texel {
    const int w = s.width(0);
    const int h = s.height(0);
    float sum = 0.0f;
    float center = 0.0f;
    for (int j = -1; j <= 1; ++j) {
      for (int i = -1; i <= 1; ++i) {
        const float v = fetch_branchy(s, w, h, x + i, y + j)[0];
        sum += v;
        if (i == 0 && j == 0) center = v;
      }
    }
    if (sum >= 2.0f) return {center, 0.0f, 0.0f, 0.0f};
    return {0.0f, 0.0f, 0.0f, 0.0f};
  });
}

}  // namespace branchy

EdgeComparison compare_edges(const BinaryEdgeMap& candidate, const BinaryEdgeMap& truth) {
  if (candidate.width != truth.width || candidate.height != truth.height) {
    throw InvalidInput("edge maps differ in size");
  }
  EdgeComparison cmp;
  for (std::size_t i = 0; i < truth.bits.size(); ++i) {
    const bool c = candidate.bits[i] != 0;
    const bool t = truth.bits[i] != 0;
    if (c && t) ++cmp.true_positive;
    if (c && !t) ++cmp.false_positive;
    if (!c && t) ++cmp.false_negative;
  }
  const double tp = static_cast<double>(cmp.true_positive);
  const std::size_t predicted = cmp.true_positive + cmp.false_positive;
  const std::size_t actual = cmp.true_positive + cmp.false_negative;
  cmp.precision = predicted == 0 ? 1.0 : tp / static_cast<double>(predicted);
  cmp.recall = actual == 0 ? 1.0 : tp / static_cast<double>(actual);
  if (predicted == 0 && actual == 0) {
    cmp.f1 = 1.0;
  } else if (cmp.precision + cmp.recall == 0.0) {
    cmp.f1 = 0.0;
  } else {
    cmp.f1 = 2.0 * cmp.precision * cmp.recall / (cmp.precision + cmp.recall);
  }
  return cmp;
}

}  // namespace shadercanny::reference
