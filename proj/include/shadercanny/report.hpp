#pragma once

#include <string>

#include "shadercanny/pass_engine.hpp"

namespace shadercanny {

inline constexpr const char* kCsvHeader = "pass,mean_ms,std_ms,reads_per_pixel";
inline constexpr const char* kUploadLabel = "Reload texture";

/// One row per pass followed by the upload row. Timing fields are empty for
/// passes that were not individually timed. Numbers use shortest round-trip
/// formatting so they parse back to the same doubles as the JSON form.
std::string to_csv(const PipelineReport& report);

/// Same rows as the CSV under "rows", plus mode, pipeline time, fps and the
/// serialized upper bound.
std::string to_json(const PipelineReport& report, int indent = 2);

/// Human-readable table: "label  mean ± std  reads/px".
std::string to_text(const PipelineReport& report);

}  // namespace shadercanny
