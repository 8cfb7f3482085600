#pragma once

#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "shadercanny/pass_engine.hpp"
#include "shadercanny/precision.hpp"
#include "shadercanny/texture.hpp"

namespace shadercanny {

enum class MagnitudeMode { exact, manhattan };

std::string_view to_string(MagnitudeMode mode);
std::optional<MagnitudeMode> parse_magnitude_mode(std::string_view name);

struct CannyParams {
  int kernel_size = 3;
  double low_threshold = 0.1;
  double high_threshold = 0.25;
  MagnitudeMode magnitude_mode = MagnitudeMode::exact;

  /// Throws InvalidInput for kernel sizes other than 3/5 or thresholds that
  /// are outside (0,1) or not strictly increasing.
  void validate() const;
};

/// One of the eight primary directions; components are -1, 0 or 1 and
/// +y points down the raster.
struct Direction {
  int dx = 1;
  int dy = 0;

  Direction operator-() const noexcept { return {-dx, -dy}; }
  friend bool operator==(const Direction&, const Direction&) = default;
};

enum class Axis { x, y };

// GLSL-style helpers, written without data-dependent branches.
inline float step(float edge, float x) noexcept { return static_cast<float>(x >= edge); }

inline float clamp01(float x) noexcept { return std::fmin(std::fmax(x, 0.0f), 1.0f); }

/// Cubic Hermite ramp t^2 (3 - 2t) with t = clamp((x - a) / (b - a), 0, 1).
inline float smoothstep(float edge0, float edge1, float x) noexcept {
  const float t = clamp01((x - edge0) / (edge1 - edge0));
  return t * t * (3.0f - 2.0f * t);
}

/// Classifies a gradient vector into the nearest of the eight primary
/// directions, using half-open sectors [c - 22.5deg, c + 22.5deg).
///
/// No data-dependent branching: the vector is rotated by +pi/8 so every
/// sector starts at a multiple of 45deg, its angle is doubled by complex
/// squaring so that the sector pair {k, k+4} lands in quadrant k mod 4, and
/// the signs of the doubled and rotated vectors select the direction.
/// A zero vector gives (1,0).
Direction classify_direction(float gx, float gy) noexcept;

inline constexpr std::string_view kGreyscaleLabel = "Greyscale";
inline constexpr std::string_view kGaussianXLabel = "Gaussian X";
inline constexpr std::string_view kGaussianYLabel = "Gaussian Y";
inline constexpr std::string_view kGradientLabel = "Gradient";
inline constexpr std::string_view kNonMaxLabel = "Non-max Sup";
inline constexpr std::string_view kWeakPixelsLabel = "Weak Pixels";

/// Normalized binomial weights: [1,2,1]/4 or [1,4,6,4,1]/16.
std::vector<float> binomial_weights(int kernel_size);

/// Pass kernels. All are branch-free per pixel; `storage` is the output
/// precision.
namespace kernels {

/// Luma 0.299 R + 0.587 G + 0.114 B from one three-channel fetch.
PassKernel greyscale(Precision storage = Precision::mediump);
/// 1D binomial convolution along `axis`, clamp-to-edge.
PassKernel gaussian(Axis axis, int kernel_size, Precision storage = Precision::mediump);
/// Sobel/4 gradient; outputs (magnitude, dx, dy).
PassKernel gradient(MagnitudeMode mode, Precision storage = Precision::mediump);
/// Non-maximum suppression along the classified direction followed by a
/// smoothstep double threshold.
PassKernel nms_threshold(float low, float high, Precision storage = Precision::mediump);
/// s(p) * step(2.0, sum of the 3x3 strengths).
PassKernel weak_pixels(Precision storage = Precision::mediump);

}  // namespace kernels

/// Full pass list for an input layout (greyscale pass only for rgb888).
std::vector<PassKernel> build_canny_passes(PixelLayout layout, const CannyParams& params,
                                           Precision storage = Precision::mediump);

// Single-pass operations on textures.

Texture2D rgb_to_grey(const Texture2D& rgb, Precision storage = Precision::mediump,
                      const PassEngine& engine = PassEngine{});
Texture2D gaussian_1d(const Texture2D& src, Axis axis, int kernel_size,
                      Precision storage = Precision::mediump,
                      const PassEngine& engine = PassEngine{});
/// Three-channel texture (magnitude, dx, dy).
Texture2D gradient_pass(const Texture2D& smoothed, MagnitudeMode mode = MagnitudeMode::exact,
                        Precision storage = Precision::mediump,
                        const PassEngine& engine = PassEngine{});
Texture2D nms_threshold_pass(const Texture2D& gradient, double low, double high,
                             Precision storage = Precision::mediump,
                             const PassEngine& engine = PassEngine{});
Texture2D weak_pixel_pass(const Texture2D& strength, Precision storage = Precision::mediump,
                          const PassEngine& engine = PassEngine{});

struct DetectOptions {
  Precision storage = Precision::mediump;
  int repetitions = 1;
  TimingMode mode = TimingMode::serialized;
  /// 0 = hardware concurrency.
  unsigned threads = 0;
};

struct DetectResult {
  /// Uploaded source texture.
  Texture2D source;
  PipelineRun run;
  /// round(255 * strength); nonzero pixels are edges.
  ImageBuffer edges;
};

/// upload -> [greyscale] -> gaussian x -> gaussian y -> gradient ->
/// non-max suppression -> weak pixels. Uploads are timed as the
/// "Reload texture" row.
DetectResult detect_edges(const ImageBuffer& image, const CannyParams& params,
                          const DetectOptions& options = {});

}  // namespace shadercanny
