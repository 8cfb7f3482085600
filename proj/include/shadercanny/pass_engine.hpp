#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shadercanny/precision.hpp"
#include "shadercanny/texture.hpp"

namespace shadercanny {

/// Counting clamp-to-edge sampler handed to kernel bodies. Each fetch is one
/// texture read, whatever the number of channels, as in a GLSL texture2D().
class Sampler {
 public:
  explicit Sampler(std::span<const TextureView> inputs) noexcept : inputs_(inputs) {}

  Texel fetch(int input, int x, int y) noexcept {
    ++reads_;
    return inputs_[static_cast<std::size_t>(input)].fetch_clamped(x, y);
  }

  float sample_clamped(int input, int x, int y, int channel) noexcept {
    return fetch(input, x, y)[static_cast<std::size_t>(channel)];
  }

  std::uint64_t reads() const noexcept { return reads_; }

  int width(int input) const noexcept { return inputs_[static_cast<std::size_t>(input)].width; }
  int height(int input) const noexcept { return inputs_[static_cast<std::size_t>(input)].height; }

 private:
  std::span<const TextureView> inputs_;
  std::uint64_t reads_ = 0;
};

/// Where a pass input comes from inside a pipeline.
enum class InputRole { previous, source };

/// Pure per-pixel function producing the output texel at (x, y).
using KernelBody = std::function<Texel(Sampler&, int x, int y)>;

/// One fragment-shader-like render pass.
struct PassKernel {
  std::string name;
  std::vector<InputRole> inputs{InputRole::previous};
  int output_channels = 1;
  Precision output_precision = Precision::mediump;
  /// Largest |offset| of any sample relative to the output pixel. Used to
  /// schedule row bands in pipelined mode.
  int footprint_radius = 0;
  KernelBody body;
};

struct TimingStats {
  double mean_ms = 0.0;
  /// Sample standard deviation; 0 for fewer than two samples.
  double std_ms = 0.0;

  static TimingStats from_samples(std::span<const double> samples_ms);
};

struct PassReport {
  std::string name;
  int width = 0;
  int height = 0;
  std::uint64_t texel_reads = 0;
  std::uint64_t texel_writes = 0;
  /// Absent when the pass was not individually timed (pipelined mode).
  std::optional<TimingStats> wall_time;

  double reads_per_pixel() const noexcept;
};

enum class TimingMode {
  /// Barrier after every pass; each pass timed on its own.
  serialized,
  /// Passes overlap across row bands; only end-to-end time is measured.
  pipelined,
};

struct PipelineReport {
  TimingMode mode = TimingMode::serialized;
  std::vector<PassReport> passes;
  std::optional<PassReport> upload;
  /// End-to-end pipelined time of each repetition.
  std::vector<double> pipeline_samples_ms;
  /// Upload plus pipeline time per frame; filled when uploads are timed.
  std::vector<double> frame_samples_ms;

  TimingStats pipeline_time() const;
  /// Sum of the mean per-pass times, an upper bound on pipeline time.
  /// Zero when passes were not individually timed.
  double serialized_total_ms() const;
  /// Frames per second over frame samples (falls back to pipeline samples).
  TimingStats fps() const;
};

struct PassResult {
  Texture2D output;
  PassReport report;
};

struct PipelineRun {
  /// Output of every pass, in order.
  std::vector<Texture2D> stages;
  PipelineReport report;

  const Texture2D& output() const { return stages.back(); }
};

struct PipelineOptions {
  int repetitions = 10;
  TimingMode mode = TimingMode::serialized;
};

/// Executes pass kernels over textures with data-parallel workers. Results
/// are bit-identical for any thread count.
class PassEngine {
 public:
  /// `threads == 0` uses the hardware concurrency.
  explicit PassEngine(unsigned threads = 0);

  unsigned threads() const noexcept { return threads_; }

  /// Runs one pass producing a width x height texture. Inputs must all be
  /// width x height. A NaN stored to a lowp output throws InvalidValue
  /// naming the pixel.
  PassResult run_pass(const PassKernel& kernel, std::span<const Texture2D* const> inputs,
                      int width, int height) const;

  /// Runs `passes` in order on `source`, `options.repetitions` times.
  /// Serialized mode times each pass with a barrier after it and also
  /// measures pipelined end-to-end time; pipelined mode measures only the
  /// latter. Pass errors are rethrown as PassError.
  PipelineRun run_pipeline(std::span<const PassKernel> passes, const Texture2D& source,
                           const PipelineOptions& options = {}) const;

 private:
  std::vector<Texture2D> run_serialized(std::span<const PassKernel> passes,
                                        const Texture2D& source,
                                        std::vector<PassReport>& reports,
                                        std::vector<std::vector<double>>* samples) const;
  std::vector<Texture2D> run_overlapped(std::span<const PassKernel> passes,
                                        const Texture2D& source,
                                        std::vector<PassReport>& reports) const;

  unsigned threads_;
};

}  // namespace shadercanny
