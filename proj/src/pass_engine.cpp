#include "shadercanny/pass_engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "shadercanny/errors.hpp"

namespace shadercanny {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start, Clock::time_point end) {
  return std::chrono::duration<double, std::milli>(end - start).count();
}

std::size_t texel_index(int x, int y, int width, int channels) {
  return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
          static_cast<std::size_t>(x)) *
         static_cast<std::size_t>(channels);
}

/// Runs the kernel body for rows [y0, y1) and stores quantized texels.
/// Returns the number of texture reads performed.
std::uint64_t execute_rows(const PassKernel& kernel, std::span<const TextureView> inputs,
                           int width, int y0, int y1, std::span<float> out) {
  Sampler sampler(inputs);
  const int channels = kernel.output_channels;
  const Precision precision = kernel.output_precision;
  for (int y = y0; y < y1; ++y) {
    for (int x = 0; x < width; ++x) {
      const Texel texel = kernel.body(sampler, x, y);
      float* dst = out.data() + texel_index(x, y, width, channels);
      for (int c = 0; c < channels; ++c) {
        const float v = texel[static_cast<std::size_t>(c)];
        if (precision == Precision::lowp && std::isnan(v)) {
          throw InvalidValue("NaN stored to lowp output at (" + std::to_string(x) + "," +
                             std::to_string(y) + ") channel " + std::to_string(c));
        }
        dst[c] = quantize(v, precision);
      }
    }
  }
  return sampler.reads();
}

void validate_kernel(const PassKernel& kernel) {
  if (!kernel.body) {
    throw InvalidInput("pass '" + kernel.name + "' has no body");
  }
  if (kernel.output_channels < 1 || kernel.output_channels > 4) {
    throw InvalidInput("pass '" + kernel.name + "' output channels must be 1..4");
  }
  if (kernel.footprint_radius < 0) {
    throw InvalidInput("pass '" + kernel.name + "' has a negative footprint radius");
  }
}

/// Rethrows `error` as a PassError carrying the pass name.
[[noreturn]] void rethrow_in_pass(const std::string& pass, std::exception_ptr error) {
  try {
    std::rethrow_exception(error);
  } catch (const PassError&) {
    throw;
  } catch (const std::exception& e) {
    throw PassError(pass, e.what());
  }
}

/// Splits [0, rows) into `chunks` contiguous ranges and runs fn(chunk, y0, y1)
/// on separate threads. The exception of the lowest failing chunk wins.
template <typename Fn>
void parallel_rows(unsigned chunks, int rows, Fn&& fn) {
  chunks = std::max(1u, std::min(chunks, static_cast<unsigned>(rows)));
  auto bounds = [&](unsigned i) {
    return static_cast<int>(static_cast<long long>(rows) * i / chunks);
  };
  if (chunks == 1) {
    fn(0u, 0, rows);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  {
    std::vector<std::jthread> workers;
    workers.reserve(chunks);
    for (unsigned i = 0; i < chunks; ++i) {
      workers.emplace_back([&, i] {
        try {
          fn(i, bounds(i), bounds(i + 1));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<TextureView> resolve_inputs(const PassKernel& kernel, const TextureView& previous,
                                        const TextureView& source) {
  std::vector<TextureView> views;
  views.reserve(kernel.inputs.size());
  for (InputRole role : kernel.inputs) {
    views.push_back(role == InputRole::previous ? previous : source);
  }
  return views;
}

}  // namespace

TimingStats TimingStats::from_samples(std::span<const double> samples_ms) {
  TimingStats stats;
  if (samples_ms.empty()) return stats;
  const double n = static_cast<double>(samples_ms.size());
  stats.mean_ms = std::accumulate(samples_ms.begin(), samples_ms.end(), 0.0) / n;
  if (samples_ms.size() > 1) {
    double ss = 0.0;
    for (double s : samples_ms) ss += (s - stats.mean_ms) * (s - stats.mean_ms);
    stats.std_ms = std::sqrt(ss / (n - 1.0));
  }
  return stats;
}

double PassReport::reads_per_pixel() const noexcept {
  const double pixels = static_cast<double>(width) * static_cast<double>(height);
  return pixels > 0.0 ? static_cast<double>(texel_reads) / pixels : 0.0;
}

TimingStats PipelineReport::pipeline_time() const {
  return TimingStats::from_samples(pipeline_samples_ms);
}

double PipelineReport::serialized_total_ms() const {
  double total = 0.0;
  for (const auto& p : passes) {
    if (p.wall_time) total += p.wall_time->mean_ms;
  }
  return total;
}

TimingStats PipelineReport::fps() const {
  const auto& samples = frame_samples_ms.empty() ? pipeline_samples_ms : frame_samples_ms;
  std::vector<double> rates;
  rates.reserve(samples.size());
  for (double ms : samples) {
    if (ms > 0.0) rates.push_back(1000.0 / ms);
  }
  // Stats helper is unit-agnostic; mean_ms/std_ms hold frames per second here.
  return TimingStats::from_samples(rates);
}

PassEngine::PassEngine(unsigned threads)
    : threads_(threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency())) {}

PassResult PassEngine::run_pass(const PassKernel& kernel,
                                std::span<const Texture2D* const> inputs, int width,
                                int height) const {
  validate_kernel(kernel);
  if (width < 1 || height < 1) {
    throw InvalidInput("pass '" + kernel.name + "' requested a " + std::to_string(width) +
                       "x" + std::to_string(height) + " output");
  }
  if (inputs.size() != kernel.inputs.size()) {
    throw InvalidInput("pass '" + kernel.name + "' expects " +
                       std::to_string(kernel.inputs.size()) + " inputs, got " +
                       std::to_string(inputs.size()));
  }
  std::vector<TextureView> views;
  views.reserve(inputs.size());
  for (const Texture2D* tex : inputs) {
    if (tex == nullptr || tex->width() != width || tex->height() != height) {
      throw InvalidInput("pass '" + kernel.name + "' input dimensions do not match output");
    }
    views.push_back(tex->view());
  }

  std::vector<float> out(texel_index(0, height, width, kernel.output_channels));
  std::vector<std::uint64_t> reads(threads_, 0);
  parallel_rows(threads_, height, [&](unsigned chunk, int y0, int y1) {
    reads[chunk] = execute_rows(kernel, views, width, y0, y1, out);
  });

  PassReport report;
  report.name = kernel.name;
  report.width = width;
  report.height = height;
  report.texel_reads = std::accumulate(reads.begin(), reads.end(), std::uint64_t{0});
  report.texel_writes = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  return PassResult{Texture2D::adopt_quantized(width, height, kernel.output_channels,
                                               kernel.output_precision, std::move(out)),
                    std::move(report)};
}

std::vector<Texture2D> PassEngine::run_serialized(
    std::span<const PassKernel> passes, const Texture2D& source,
    std::vector<PassReport>& reports, std::vector<std::vector<double>>* samples) const {
  std::vector<Texture2D> stages;
  stages.reserve(passes.size());
  reports.clear();
  for (std::size_t k = 0; k < passes.size(); ++k) {
    const PassKernel& kernel = passes[k];
    const Texture2D& previous = k == 0 ? source : stages.back();
    std::vector<const Texture2D*> inputs;
    for (InputRole role : kernel.inputs) {
      inputs.push_back(role == InputRole::previous ? &previous : &source);
    }
    const auto start = Clock::now();
    PassResult result = [&] {
      try {
        return run_pass(kernel, inputs, source.width(), source.height());
      } catch (...) {
        rethrow_in_pass(kernel.name, std::current_exception());
      }
    }();
    // run_pass joins its workers before returning: the barrier after each pass.
    const auto end = Clock::now();
    if (samples != nullptr) (*samples)[k].push_back(elapsed_ms(start, end));
    reports.push_back(std::move(result.report));
    stages.push_back(std::move(result.output));
  }
  return stages;
}

std::vector<Texture2D> PassEngine::run_overlapped(std::span<const PassKernel> passes,
                                                  const Texture2D& source,
                                                  std::vector<PassReport>& reports) const {
  const int width = source.width();
  const int height = source.height();
  const std::size_t pass_count = passes.size();

  // Row bands are the unit of scheduling; a band of pass k may start as soon
  // as the bands of pass k-1 under its sampling footprint are finished.
  const unsigned workers = std::max(1u, std::min(threads_, static_cast<unsigned>(height)));
  const int band_rows = std::max(1, (height + static_cast<int>(workers) * 4 - 1) /
                                        (static_cast<int>(workers) * 4));
  const int bands = (height + band_rows - 1) / band_rows;

  std::vector<std::vector<float>> buffers(pass_count);
  std::vector<TextureView> outputs(pass_count);
  for (std::size_t k = 0; k < pass_count; ++k) {
    validate_kernel(passes[k]);
    buffers[k].assign(texel_index(0, height, width, passes[k].output_channels), 0.0f);
    outputs[k] = TextureView{buffers[k], width, height, passes[k].output_channels};
  }
  std::vector<std::vector<TextureView>> views(pass_count);
  for (std::size_t k = 0; k < pass_count; ++k) {
    views[k] = resolve_inputs(passes[k], k == 0 ? source.view() : outputs[k - 1],
                              source.view());
  }

  std::vector<std::atomic<std::uint8_t>> done(pass_count * static_cast<std::size_t>(bands));
  std::atomic<bool> abort{false};
  std::mutex error_mutex;
  std::size_t error_slot = done.size();
  std::exception_ptr error;
  std::vector<std::vector<std::uint64_t>> reads(pass_count,
                                                std::vector<std::uint64_t>(workers, 0));

  auto flag = [&](std::size_t k, int band) -> std::atomic<std::uint8_t>& {
    return done[k * static_cast<std::size_t>(bands) + static_cast<std::size_t>(band)];
  };
  auto release_all = [&] {
    for (auto& f : done) {
      f.store(1, std::memory_order_release);
      f.notify_all();
    }
  };

  auto work = [&](unsigned worker) {
    const int first = static_cast<int>(static_cast<long long>(bands) * worker / workers);
    const int last = static_cast<int>(static_cast<long long>(bands) * (worker + 1) / workers);
    for (std::size_t k = 0; k < pass_count; ++k) {
      const PassKernel& kernel = passes[k];
      const bool depends =
          k > 0 && std::find(kernel.inputs.begin(), kernel.inputs.end(),
                             InputRole::previous) != kernel.inputs.end();
      for (int band = first; band < last; ++band) {
        const int y0 = band * band_rows;
        const int y1 = std::min(height, y0 + band_rows);
        if (depends) {
          const int need_lo = std::max(0, y0 - kernel.footprint_radius) / band_rows;
          const int need_hi = std::min(height - 1, y1 - 1 + kernel.footprint_radius) / band_rows;
          for (int nb = need_lo; nb <= need_hi; ++nb) {
            auto& f = flag(k - 1, nb);
            while (f.load(std::memory_order_acquire) == 0) f.wait(0, std::memory_order_acquire);
          }
        }
        if (abort.load(std::memory_order_acquire)) return;
        try {
          reads[k][worker] += execute_rows(kernel, views[k], width, y0, y1, buffers[k]);
        } catch (...) {
          {
            const std::scoped_lock lock(error_mutex);
            const std::size_t slot = k * static_cast<std::size_t>(bands) +
                                     static_cast<std::size_t>(band);
            if (slot < error_slot) {
              error_slot = slot;
              error = std::current_exception();
            }
          }
          abort.store(true, std::memory_order_release);
          release_all();
          return;
        }
        auto& f = flag(k, band);
        f.store(1, std::memory_order_release);
        f.notify_all();
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  if (error) {
    rethrow_in_pass(passes[error_slot / static_cast<std::size_t>(bands)].name, error);
  }

  reports.clear();
  std::vector<Texture2D> stages;
  stages.reserve(pass_count);
  for (std::size_t k = 0; k < pass_count; ++k) {
    PassReport report;
    report.name = passes[k].name;
    report.width = width;
    report.height = height;
    report.texel_reads = std::accumulate(reads[k].begin(), reads[k].end(), std::uint64_t{0});
    report.texel_writes = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
    reports.push_back(std::move(report));
    stages.push_back(Texture2D::adopt_quantized(width, height, passes[k].output_channels,
                                                passes[k].output_precision,
                                                std::move(buffers[k])));
  }
  return stages;
}

PipelineRun PassEngine::run_pipeline(std::span<const PassKernel> passes,
                                     const Texture2D& source,
                                     const PipelineOptions& options) const {
  if (passes.empty()) {
    throw InvalidInput("pipeline has no passes");
  }
  if (options.repetitions < 1) {
    throw InvalidInput("repetitions must be at least 1");
  }

  PipelineRun run;
  run.report.mode = options.mode;
  std::vector<std::vector<double>> pass_samples(passes.size());
  std::vector<PassReport> serialized_reports;
  std::vector<PassReport> overlapped_reports;

  for (int rep = 0; rep < options.repetitions; ++rep) {
    if (options.mode == TimingMode::serialized) {
      run.stages = run_serialized(passes, source, serialized_reports, &pass_samples);
    }
    const auto start = Clock::now();
    auto stages = run_overlapped(passes, source, overlapped_reports);
    run.report.pipeline_samples_ms.push_back(elapsed_ms(start, Clock::now()));
    if (options.mode == TimingMode::pipelined) run.stages = std::move(stages);
  }

  if (options.mode == TimingMode::serialized) {
    run.report.passes = std::move(serialized_reports);
    for (std::size_t k = 0; k < passes.size(); ++k) {
      run.report.passes[k].wall_time = TimingStats::from_samples(pass_samples[k]);
    }
  } else {
    run.report.passes = std::move(overlapped_reports);
  }
  return run;
}

}  // namespace shadercanny
