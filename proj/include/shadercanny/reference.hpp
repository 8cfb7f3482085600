#pragma once

#include <cstdint>
#include <vector>

#include "shadercanny/canny.hpp"
#include "shadercanny/pass_engine.hpp"
#include "shadercanny/texture.hpp"

// Straightforward, intentionally conditional implementations used as ground
// truth for differential tests. Everything here runs in binary32 without
// precision emulation and makes no attempt to be fast.
namespace shadercanny::reference {

/// Single-channel float image.
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  Grid() = default;
  Grid(int w, int h, float fill = 0.0f);

  float& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  float at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  /// Clamp-to-edge read.
  float clamped(int x, int y) const;
};

/// Row-major 2D weights with odd dimensions.
struct Kernel2D {
  int width = 1;
  int height = 1;
  std::vector<float> weights{1.0f};

  static Kernel2D outer(const std::vector<float>& column, const std::vector<float>& row);
};

struct BinaryEdgeMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  std::size_t count() const;
};

/// Nearest of the eight directions by atan2 rounding, half-open sectors.
/// Throws InvalidInput for the zero vector.
Direction direction_oracle(double gx, double gy);

/// Direct 2D convolution with clamp-to-edge borders. Throws InvalidInput for
/// even kernel dimensions or a weight count mismatch.
Grid convolve2d_reference(const Grid& src, const Kernel2D& kernel);

/// Intermediate maps of the textbook detector.
struct ClassicStages {
  Grid smoothed;
  Grid magnitude;
  /// Magnitude after non-maximum suppression (ties kept).
  Grid suppressed;
  /// suppressed >= high
  BinaryEdgeMap strong;
  /// low < suppressed (strong included)
  BinaryEdgeMap candidates;
  /// Strong pixels plus every candidate 8-connected to one through candidates.
  BinaryEdgeMap edges;
};

ClassicStages classic_canny_stages(const Grid& grey, const CannyParams& params);

/// Gaussian, Sobel/4, non-maximum suppression with the pipeline's tie rule
/// and double threshold with full transitive hysteresis.
BinaryEdgeMap classic_canny(const Grid& grey, const CannyParams& params);

Grid grid_from_texture(const Texture2D& texture, int channel = 0);
/// v/255 for grey8; BT.601 luma of v/255 for rgb888.
Grid grid_from_image(const ImageBuffer& image);
/// Nonzero bytes are edges.
BinaryEdgeMap edge_map_from_image(const ImageBuffer& image);
/// Values > 0 are edges.
BinaryEdgeMap edge_map_from_texture(const Texture2D& texture, int channel = 0);

/// Conditional twins of the pipeline kernels: explicit border ifs and
/// if/else decisions, same arithmetic. Used to check the branch-free
/// kernels bit for bit.
namespace branchy {

PassKernel gaussian(Axis axis, int kernel_size, Precision storage = Precision::highp);
PassKernel gradient(MagnitudeMode mode, Precision storage = Precision::highp);
PassKernel nms_threshold(float low, float high, Precision storage = Precision::highp);
PassKernel weak_pixels(Precision storage = Precision::highp);

}  // namespace branchy

struct EdgeComparison {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t false_negative = 0;
  double precision = 1.0;
  double recall = 1.0;
  /// 1.0 when both sets are empty.
  double f1 = 1.0;
};

/// Pixel-exact comparison of `candidate` against `truth`.
EdgeComparison compare_edges(const BinaryEdgeMap& candidate, const BinaryEdgeMap& truth);

}  // namespace shadercanny::reference
