#include "shadercanny/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "shadercanny/canny.hpp"
#include "shadercanny/errors.hpp"
#include "shadercanny/offload.hpp"
#include "shadercanny/pnm.hpp"
#include "shadercanny/reference.hpp"
#include "shadercanny/report.hpp"

namespace shadercanny::cli {
namespace {

namespace fs = std::filesystem;

struct CommonFlags {
  int kernel = 3;
  double low = 0.1;
  double high = 0.25;
  std::string magnitude = "exact";
  std::string precision = "mediump";
  unsigned threads = 0;

  CannyParams params() const {
    CannyParams p;
    p.kernel_size = kernel;
    p.low_threshold = low;
    p.high_threshold = high;
    p.magnitude_mode = *parse_magnitude_mode(magnitude);
    p.validate();
    return p;
  }

  DetectOptions options(int repetitions = 1, TimingMode mode = TimingMode::serialized) const {
    DetectOptions o;
    o.storage = *parse_precision(precision);
    o.repetitions = repetitions;
    o.mode = mode;
    o.threads = threads;
    return o;
  }
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--kernel", flags.kernel, "Gaussian kernel size")
      ->check(CLI::IsMember({3, 5}))
      ->capture_default_str();
  cmd->add_option("--low", flags.low, "Lower threshold on normalized magnitude")
      ->capture_default_str();
  cmd->add_option("--high", flags.high, "Upper threshold on normalized magnitude")
      ->capture_default_str();
  cmd->add_option("--magnitude", flags.magnitude, "Gradient magnitude mode")
      ->check(CLI::IsMember({"exact", "manhattan"}))
      ->capture_default_str();
  cmd->add_option("--precision", flags.precision, "Texture storage precision")
      ->check(CLI::IsMember({"lowp", "mediump", "highp"}))
      ->capture_default_str();
  cmd->add_option("--threads", flags.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
}

std::string format(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::string slug(std::string_view label) {
  std::string s;
  for (char c : label) {
    if (c == ' ' || c == '-') {
      s += '_';
    } else {
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return s;
}

/// Visualization bytes for any texture: one channel -> P5, otherwise the
/// first three channels -> P6. Channels listed in `signed_channels` are
/// biased by (v+1)/2.
ImageBuffer visualize(const Texture2D& tex, const std::vector<int>& signed_channels = {}) {
  const int out_channels = tex.channels() == 1 ? 1 : 3;
  ImageBuffer img;
  img.width = tex.width();
  img.height = tex.height();
  img.layout = out_channels == 1 ? PixelLayout::grey8 : PixelLayout::rgb888;
  img.bytes.resize(static_cast<std::size_t>(img.width) * img.height * out_channels);
  for (int y = 0; y < tex.height(); ++y) {
    for (int x = 0; x < tex.width(); ++x) {
      for (int c = 0; c < out_channels; ++c) {
        float v = c < tex.channels() ? tex.at(x, y, c) : 0.0f;
        if (std::find(signed_channels.begin(), signed_channels.end(), c) !=
            signed_channels.end()) {
          v = (v + 1.0f) * 0.5f;
        }
        v = std::isnan(v) ? 0.0f : std::clamp(v, 0.0f, 1.0f);
        img.bytes[(static_cast<std::size_t>(y) * img.width + x) * out_channels + c] =
            static_cast<std::uint8_t>(std::lround(255.0f * v));
      }
    }
  }
  return img;
}

int cmd_detect(const std::string& input, const std::string& output, const CommonFlags& flags,
               std::ostream& out) {
  const ImageBuffer image = pnm::read(input);
  const DetectResult result = detect_edges(image, flags.params(), flags.options());
  pnm::write(output, result.edges);
  const auto& report = result.run.report;
  out << format("%dx%d, %zu passes, %.3f ms total\n", image.width, image.height,
                report.passes.size(), report.upload->wall_time->mean_ms + report.pipeline_time().mean_ms);
  return kExitOk;
}

int cmd_bench(const std::string& input, int frames, const std::string& mode,
              const std::string& format_name, const std::string& output,
              const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  const ImageBuffer image = pnm::read(input);
  const TimingMode timing = mode == "pipelined" ? TimingMode::pipelined : TimingMode::serialized;
  const DetectResult result = detect_edges(image, flags.params(), flags.options(frames, timing));
  const PipelineReport& report = result.run.report;
  const std::string body = format_name == "json" ? to_json(report) + "\n" : to_csv(report);

  const TimingStats fps = report.fps();
  std::string summary = format("%dx%d, %d frames, %s: %.3f ± %.3f ms per frame, %.2f ± %.2f fps\n",
                               image.width, image.height, frames, mode.c_str(),
                               report.pipeline_time().mean_ms, report.pipeline_time().std_ms,
                               fps.mean_ms, fps.std_ms);
  if (timing == TimingMode::serialized) {
    summary += format("sum of serialized pass times %.3f ms is an upper bound on pipeline time\n",
                      report.serialized_total_ms());
  }

  if (output.empty()) {
    out << body;
    err << summary;
  } else {
    std::ofstream file(output, std::ios::binary | std::ios::trunc);
    if (!file) throw InvalidInput("cannot write " + output);
    file << body;
    out << summary;
  }
  return kExitOk;
}

int cmd_compare(const std::string& input, const CommonFlags& flags, std::ostream& out) {
  const ImageBuffer image = pnm::read(input);
  const CannyParams params = flags.params();
  const DetectResult result = detect_edges(image, params, flags.options());
  const auto& stages = result.run.stages;
  const Texture2D& nms = stages[stages.size() - 2];
  const Texture2D& final_strength = stages.back();

  const auto pipeline = reference::edge_map_from_texture(final_strength);
  const auto classic = reference::classic_canny(reference::grid_from_image(image), params);
  const auto cmp = reference::compare_edges(pipeline, classic);

  std::size_t strong = 0, weak = 0, suppressed = 0;
  for (int y = 0; y < nms.height(); ++y) {
    for (int x = 0; x < nms.width(); ++x) {
      const float before = nms.at(x, y);
      const float after = final_strength.at(x, y);
      if (before >= 1.0f) ++strong;
      if (before > 0.0f && before < 1.0f && after > 0.0f) ++weak;
      if (before > 0.0f && after == 0.0f) ++suppressed;
    }
  }

  out << format("precision %.6f\n", cmp.precision);
  out << format("recall %.6f\n", cmp.recall);
  out << format("f1 %.6f\n", cmp.f1);
  if (pipeline.count() == 0 && classic.count() == 0) {
    out << "note: both edge sets are empty; precision, recall and F1 are defined as 1.0\n";
  }
  out << format("pipeline_edges %zu\n", pipeline.count());
  out << format("reference_edges %zu\n", classic.count());
  out << format("strong %zu\n", strong);
  out << format("weak %zu\n", weak);
  out << format("suppressed %zu\n", suppressed);
  return kExitOk;
}

int cmd_dump(const std::string& input, const std::string& outdir, const CommonFlags& flags,
             std::ostream& out) {
  const ImageBuffer image = pnm::read(input);
  const DetectResult result = detect_edges(image, flags.params(), flags.options());

  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec || !fs::is_directory(outdir)) {
    throw InvalidInput("cannot create output directory " + outdir);
  }

  auto write_stage = [&](int index, std::string_view label, const ImageBuffer& img) {
    const std::string name = format("%02d_", index) + slug(label) +
                             (img.layout == PixelLayout::grey8 ? ".pgm" : ".ppm");
    pnm::write(fs::path(outdir) / name, img);
    out << name << '\n';
  };

  write_stage(0, "upload", visualize(result.source));
  const auto& stages = result.run.stages;
  const auto& passes = result.run.report.passes;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    // Gradient direction channels are signed.
    const bool gradient = passes[k].name == kGradientLabel;
    write_stage(static_cast<int>(k) + 1, passes[k].name,
                visualize(stages[k], gradient ? std::vector<int>{1, 2} : std::vector<int>{}));
  }
  return kExitOk;
}

int cmd_offload(std::uint64_t frame_bytes, std::uint64_t result_bytes, const std::string& link,
                std::optional<double> uplink, std::optional<double> downlink,
                std::optional<double> rtt, std::ostream& out) {
  LinkProfile profile = *find_profile(link);
  if (uplink) profile.uplink_bps = *uplink;
  if (downlink) profile.downlink_bps = *downlink;
  if (rtt) profile.rtt_ms = *rtt;
  const OffloadEstimate e = estimate_frame_latency(frame_bytes, result_bytes, profile);
  out << format("link %s: uplink %.0f bps, downlink %.0f bps, rtt %.3f ms\n",
                profile.name.c_str(), profile.uplink_bps, profile.downlink_bps, profile.rtt_ms);
  out << format("upload_ms %.3f\n", e.upload_ms);
  out << format("result_download_ms %.3f\n", e.result_download_ms);
  out << format("rtt_ms %.3f\n", e.rtt_ms);
  out << format("total_ms %.3f\n", e.total_ms);
  out << format("max_fps %.3f\n", e.max_fps);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Branch-free multi-pass Canny edge detection with shader precision emulation.\n"
      "Defaults: kernel 3, low 0.1, high 0.25, exact magnitude, mediump storage.",
      "shadercanny"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string input;
  std::string output;

  auto* detect = app.add_subcommand("detect", "Detect edges and write a P5 edge map");
  detect->add_option("input", input, "P5/P6 input image")->required();
  detect->add_option("output", output, "P5 edge map to write")->required();
  add_common(detect, flags);

  int frames = 10;
  std::string mode = "serialized";
  std::string report_format = "csv";
  auto* bench = app.add_subcommand("bench", "Per-pass timing report (CSV or JSON)");
  bench->add_option("input", input, "P5/P6 input image")->required();
  bench->add_option("--frames", frames, "Repetitions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--mode", mode, "Timing mode")
      ->check(CLI::IsMember({"serialized", "pipelined"}))
      ->capture_default_str();
  bench->add_option("--report", report_format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  bench->add_option("--output", output, "Write the report here instead of stdout");
  add_common(bench, flags);

  auto* compare = app.add_subcommand("compare", "Compare against textbook Canny");
  compare->add_option("input", input, "P5/P6 input image")->required();
  add_common(compare, flags);

  auto* dump = app.add_subcommand("dump", "Write every pass output as PNM");
  dump->add_option("input", input, "P5/P6 input image")->required();
  dump->add_option("outdir", output, "Output directory")->required();
  add_common(dump, flags);

  std::uint64_t frame_bytes = 640 * 480;
  std::uint64_t result_bytes = 0;
  std::string link = "bluetooth";
  std::optional<double> uplink;
  std::optional<double> downlink;
  std::optional<double> rtt;
  auto* offload = app.add_subcommand("offload", "Estimate off-device transfer latency");
  offload->add_option("--frame-bytes", frame_bytes, "Bytes uploaded per frame")
      ->capture_default_str();
  offload->add_option("--result-bytes", result_bytes, "Bytes downloaded per frame")
      ->capture_default_str();
  offload->add_option("--link", link, "Built-in link profile")
      ->check(CLI::IsMember({"bluetooth", "3g", "lte"}))
      ->capture_default_str();
  offload->add_option("--uplink", uplink, "Override uplink rate (bits/s)")
      ->check(CLI::PositiveNumber);
  offload->add_option("--downlink", downlink, "Override downlink rate (bits/s)")
      ->check(CLI::PositiveNumber);
  offload->add_option("--rtt", rtt, "Override round trip (ms)")->check(CLI::NonNegativeNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*detect) return cmd_detect(input, output, flags, out);
    if (*bench) {
      return cmd_bench(input, frames, mode, report_format, output, flags, out, err);
    }
    if (*compare) return cmd_compare(input, flags, out);
    if (*dump) return cmd_dump(input, output, flags, out);
    if (*offload) {
      return cmd_offload(frame_bytes, result_bytes, link, uplink, downlink, rtt, out);
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace shadercanny::cli
