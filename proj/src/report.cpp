#include "shadercanny/report.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <vector>

#include <json.hpp>

namespace shadercanny {
namespace {

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

std::vector<const PassReport*> rows_of(const PipelineReport& report) {
  std::vector<const PassReport*> rows;
  for (const auto& p : report.passes) rows.push_back(&p);
  if (report.upload) rows.push_back(&*report.upload);
  return rows;
}

std::string_view mode_name(TimingMode mode) {
  return mode == TimingMode::serialized ? "serialized" : "pipelined";
}

}  // namespace

std::string to_csv(const PipelineReport& report) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const PassReport* row : rows_of(report)) {
    out += row->name;
    out += ',';
    if (row->wall_time) {
      out += format_number(row->wall_time->mean_ms);
      out += ',';
      out += format_number(row->wall_time->std_ms);
    } else {
      out += ',';
    }
    out += ',';
    out += format_number(row->reads_per_pixel());
    out += '\n';
  }
  return out;
}

std::string to_json(const PipelineReport& report, int indent) {
  nlohmann::json rows = nlohmann::json::array();
  for (const PassReport* row : rows_of(report)) {
    nlohmann::json r;
    r["pass"] = row->name;
    r["mean_ms"] = row->wall_time ? nlohmann::json(row->wall_time->mean_ms) : nlohmann::json();
    r["std_ms"] = row->wall_time ? nlohmann::json(row->wall_time->std_ms) : nlohmann::json();
    r["reads_per_pixel"] = row->reads_per_pixel();
    rows.push_back(std::move(r));
  }
  const TimingStats pipeline = report.pipeline_time();
  const TimingStats fps = report.fps();
  nlohmann::json doc;
  doc["mode"] = mode_name(report.mode);
  doc["rows"] = std::move(rows);
  doc["pipeline_ms"] = {{"mean", pipeline.mean_ms}, {"std", pipeline.std_ms}};
  doc["fps"] = {{"mean", fps.mean_ms}, {"std", fps.std_ms}};
  if (report.mode == TimingMode::serialized) {
    doc["serialized_total_ms"] = report.serialized_total_ms();
  }
  return doc.dump(indent);
}

std::string to_text(const PipelineReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %20s %10s\n", "Operation", "time (ms)", "reads/px");
  out += line;
  for (const PassReport* row : rows_of(report)) {
    char timing[48] = "-";
    if (row->wall_time) {
      std::snprintf(timing, sizeof timing, "%.3f ± %.3f", row->wall_time->mean_ms,
                    row->wall_time->std_ms);
    }
    std::snprintf(line, sizeof line, "%-16s %20s %10g\n", row->name.c_str(), timing,
                  row->reads_per_pixel());
    out += line;
  }
  const TimingStats pipeline = report.pipeline_time();
  const TimingStats fps = report.fps();
  std::snprintf(line, sizeof line, "pipeline: %.3f ± %.3f ms (%s), %.2f ± %.2f fps\n",
                pipeline.mean_ms, pipeline.std_ms, std::string(mode_name(report.mode)).c_str(),
                fps.mean_ms, fps.std_ms);
  out += line;
  if (report.mode == TimingMode::serialized) {
    std::snprintf(line, sizeof line,
                  "sum of serialized pass times: %.3f ms (upper bound on pipeline time)\n",
                  report.serialized_total_ms());
    out += line;
  }
  return out;
}

}  // namespace shadercanny
