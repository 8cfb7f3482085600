#include "shadercanny/canny.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "shadercanny/errors.hpp"
#include "shadercanny/report.hpp"

namespace shadercanny {
namespace {

using Clock = std::chrono::steady_clock;

// Comparison results as 0.0/1.0, the scalar equivalent of GLSL step().
inline double gt0(double v) noexcept { return static_cast<double>(v > 0.0); }
inline double ge0(double v) noexcept { return static_cast<double>(v >= 0.0); }
inline double eq0(double v) noexcept { return static_cast<double>(v == 0.0); }

PassKernel make_kernel(std::string_view name, int channels, Precision storage, int radius,
                       KernelBody body) {
  PassKernel k;
  k.name = std::string(name);
  k.inputs = {InputRole::previous};
  k.output_channels = channels;
  k.output_precision = storage;
  k.footprint_radius = radius;
  k.body = std::move(body);
  return k;
}

Texture2D run_single(const PassKernel& kernel, const Texture2D& input, const PassEngine& engine) {
  const Texture2D* inputs[] = {&input};
  return engine.run_pass(kernel, inputs, input.width(), input.height()).output;
}

void require_channels(const Texture2D& tex, int channels, std::string_view op) {
  if (tex.channels() != channels) {
    throw InvalidInput(std::string(op) + " expects a " + std::to_string(channels) +
                       "-channel texture, got " + std::to_string(tex.channels()));
  }
}

}  // namespace

std::string_view to_string(MagnitudeMode mode) {
  return mode == MagnitudeMode::exact ? "exact" : "manhattan";
}

std::optional<MagnitudeMode> parse_magnitude_mode(std::string_view name) {
  if (name == "exact") return MagnitudeMode::exact;
  if (name == "manhattan") return MagnitudeMode::manhattan;
  return std::nullopt;
}

void CannyParams::validate() const {
  if (kernel_size != 3 && kernel_size != 5) {
    throw InvalidInput("kernel size must be 3 or 5, got " + std::to_string(kernel_size));
  }
  if (!(low_threshold > 0.0 && low_threshold < 1.0) ||
      !(high_threshold > 0.0 && high_threshold < 1.0)) {
    throw InvalidInput("thresholds must lie in (0,1)");
  }
  if (!(low_threshold < high_threshold)) {
    throw InvalidInput("low threshold must be below the high threshold");
  }
}

Direction classify_direction(float gx, float gy) noexcept {
  // Double keeps the rotated/doubled vector far from sector boundaries it
  // does not actually cross; float inputs never underflow when squared here.
  static const double kCos = std::cos(std::numbers::pi / 8.0);
  static const double kSin = std::sin(std::numbers::pi / 8.0);
  const double a = gx * kCos - gy * kSin;
  const double b = gx * kSin + gy * kCos;
  // Complex square doubles the angle: sector k now sits in quadrant k mod 4.
  const double u = a * a - b * b;
  const double v = 2.0 * a * b;

  // Half-open quadrants [0,90) [90,180) [180,270) [270,360).
  const double q0 = gt0(u) * ge0(v);
  const double q1 = ge0(-u) * gt0(v);
  const double q2 = gt0(-u) * ge0(-v);
  const double q3 = ge0(u) * gt0(-v);

  // Rotated angle in [0,180) selects sectors 0..3, otherwise 4..7.
  const double upper = gt0(b) + eq0(b) * gt0(a);
  const double sign = 2.0 * upper - 1.0;
  const double zero = eq0(a) * eq0(b);

  const double dx = sign * (q0 + q1 - q3) + zero;
  const double dy = sign * (q1 + q2 + q3);
  return {static_cast<int>(dx), static_cast<int>(dy)};
}

std::vector<float> binomial_weights(int kernel_size) {
  if (kernel_size == 3) return {0.25f, 0.5f, 0.25f};
  if (kernel_size == 5) return {1.0f / 16, 4.0f / 16, 6.0f / 16, 4.0f / 16, 1.0f / 16};
  throw InvalidInput("kernel size must be 3 or 5, got " + std::to_string(kernel_size));
}

namespace kernels {

PassKernel greyscale(Precision storage) {
  return make_kernel(kGreyscaleLabel, 1, storage, 0, [](Sampler& s, int x, int y) -> Texel {
    const Texel rgb = s.fetch(0, x, y);
    return {0.299f * rgb[0] + 0.587f * rgb[1] + 0.114f * rgb[2], 0.0f, 0.0f, 0.0f};
  });
}

PassKernel gaussian(Axis axis, int kernel_size, Precision storage) {
  const std::vector<float> weights = binomial_weights(kernel_size);
  const int radius = kernel_size / 2;
  const int ax = axis == Axis::x ? 1 : 0;
  const int ay = 1 - ax;
  return make_kernel(axis == Axis::x ? kGaussianXLabel : kGaussianYLabel, 1, storage, radius,
                     [weights, radius, ax, ay](Sampler& s, int x, int y) -> Texel {
                       float sum = 0.0f;
                       for (int i = -radius; i <= radius; ++i) {
                         sum += weights[static_cast<std::size_t>(i + radius)] *
                                s.fetch(0, x + i * ax, y + i * ay)[0];
                       }
                       return {sum, 0.0f, 0.0f, 0.0f};
                     });
}

template <MagnitudeMode Mode>
Texel sobel_texel(Sampler& s, int x, int y) {
  float p[3][3];
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) p[j][i] = s.fetch(0, x + i - 1, y + j - 1)[0];
  }
  const float gx =
      ((p[0][2] + 2.0f * p[1][2] + p[2][2]) - (p[0][0] + 2.0f * p[1][0] + p[2][0])) * 0.25f;
  const float gy =
      ((p[2][0] + 2.0f * p[2][1] + p[2][2]) - (p[0][0] + 2.0f * p[0][1] + p[0][2])) * 0.25f;
  float magnitude;
  if constexpr (Mode == MagnitudeMode::exact) {
    magnitude = std::sqrt(gx * gx + gy * gy);
  } else {
    magnitude = std::fabs(gx) + std::fabs(gy);
  }
  const Direction d = classify_direction(gx, gy);
  return {magnitude, static_cast<float>(d.dx), static_cast<float>(d.dy), 0.0f};
}

PassKernel gradient(MagnitudeMode mode, Precision storage) {
  return make_kernel(kGradientLabel, 3, storage, 1,
                     mode == MagnitudeMode::exact ? KernelBody(sobel_texel<MagnitudeMode::exact>)
                                                  : KernelBody(sobel_texel<MagnitudeMode::manhattan>));
}

PassKernel nms_threshold(float low, float high, Precision storage) {
  return make_kernel(kNonMaxLabel, 1, storage, 1, [low, high](Sampler& s, int x, int y) -> Texel {
    const Texel center = s.fetch(0, x, y);
    const int dx = static_cast<int>(center[1]);
    const int dy = static_cast<int>(center[2]);
    const float ahead = s.fetch(0, x + dx, y + dy)[0];
    const float behind = s.fetch(0, x - dx, y - dy)[0];
    const float survivor = center[0] * step(std::fmax(ahead, behind), center[0]);
    return {smoothstep(low, high, survivor), 0.0f, 0.0f, 0.0f};
  });
}

PassKernel weak_pixels(Precision storage) {
  return make_kernel(kWeakPixelsLabel, 1, storage, 1, [](Sampler& s, int x, int y) -> Texel {
    float v[9];
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) v[j * 3 + i] = s.fetch(0, x + i - 1, y + j - 1)[0];
    }
    float sum = 0.0f;
    for (float e : v) sum += e;
    return {v[4] * step(2.0f, sum), 0.0f, 0.0f, 0.0f};
  });
}

}  // namespace kernels

std::vector<PassKernel> build_canny_passes(PixelLayout layout, const CannyParams& params,
                                           Precision storage) {
  params.validate();
  std::vector<PassKernel> passes;
  if (layout == PixelLayout::rgb888) passes.push_back(kernels::greyscale(storage));
  passes.push_back(kernels::gaussian(Axis::x, params.kernel_size, storage));
  passes.push_back(kernels::gaussian(Axis::y, params.kernel_size, storage));
  passes.push_back(kernels::gradient(params.magnitude_mode, storage));
  passes.push_back(kernels::nms_threshold(static_cast<float>(params.low_threshold),
                                          static_cast<float>(params.high_threshold), storage));
  passes.push_back(kernels::weak_pixels(storage));
  return passes;
}

Texture2D rgb_to_grey(const Texture2D& rgb, Precision storage, const PassEngine& engine) {
  require_channels(rgb, 3, "rgb_to_grey");
  return run_single(kernels::greyscale(storage), rgb, engine);
}

Texture2D gaussian_1d(const Texture2D& src, Axis axis, int kernel_size, Precision storage,
                      const PassEngine& engine) {
  require_channels(src, 1, "gaussian_1d");
  return run_single(kernels::gaussian(axis, kernel_size, storage), src, engine);
}

Texture2D gradient_pass(const Texture2D& smoothed, MagnitudeMode mode, Precision storage,
                        const PassEngine& engine) {
  require_channels(smoothed, 1, "gradient_pass");
  return run_single(kernels::gradient(mode, storage), smoothed, engine);
}

Texture2D nms_threshold_pass(const Texture2D& gradient, double low, double high,
                             Precision storage, const PassEngine& engine) {
  require_channels(gradient, 3, "nms_threshold_pass");
  if (!(low < high)) {
    throw InvalidInput("low threshold must be below the high threshold");
  }
  return run_single(
      kernels::nms_threshold(static_cast<float>(low), static_cast<float>(high), storage),
      gradient, engine);
}

Texture2D weak_pixel_pass(const Texture2D& strength, Precision storage,
                          const PassEngine& engine) {
  require_channels(strength, 1, "weak_pixel_pass");
  return run_single(kernels::weak_pixels(storage), strength, engine);
}

DetectResult detect_edges(const ImageBuffer& image, const CannyParams& params,
                          const DetectOptions& options) {
  image.validate();
  params.validate();
  if (options.repetitions < 1) {
    throw InvalidInput("repetitions must be at least 1");
  }

  std::vector<double> upload_ms;
  upload_ms.reserve(static_cast<std::size_t>(options.repetitions));
  std::optional<Texture2D> source;
  for (int rep = 0; rep < options.repetitions; ++rep) {
    const auto start = Clock::now();
    source = upload(image, options.storage);
    upload_ms.push_back(
        std::chrono::duration<double, std::milli>(Clock::now() - start).count());
  }

  const std::vector<PassKernel> passes =
      build_canny_passes(image.layout, params, options.storage);
  const PassEngine engine(options.threads);
  PipelineRun run =
      engine.run_pipeline(passes, *source, PipelineOptions{options.repetitions, options.mode});

  PassReport reload;
  reload.name = kUploadLabel;
  reload.width = image.width;
  reload.height = image.height;
  reload.texel_writes =
      static_cast<std::uint64_t>(image.width) * static_cast<std::uint64_t>(image.height);
  reload.wall_time = TimingStats::from_samples(upload_ms);
  run.report.upload = std::move(reload);
  for (std::size_t i = 0; i < upload_ms.size(); ++i) {
    run.report.frame_samples_ms.push_back(upload_ms[i] + run.report.pipeline_samples_ms[i]);
  }

  ImageBuffer edges = to_grey_image(run.output());
  return DetectResult{std::move(*source), std::move(run), std::move(edges)};
}

}  // namespace shadercanny
