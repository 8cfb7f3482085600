#include "shadercanny/offload.hpp"

#include <limits>

#include "shadercanny/errors.hpp"

namespace shadercanny {

void LinkProfile::validate() const {
  if (!(uplink_bps > 0.0) || !(downlink_bps > 0.0)) {
    throw InvalidInput("link '" + name + "' rates must be positive");
  }
  if (!(rtt_ms >= 0.0)) {
    throw InvalidInput("link '" + name + "' round trip must be non-negative");
  }
}

std::vector<LinkProfile> builtin_profiles() {
  return {
      {"bluetooth", 430e3, 950e3, 0.0},
      {"3g", 150e3, 2e6, 0.0},
      {"lte", 50e6, 100e6, 10.0},
  };
}

std::optional<LinkProfile> find_profile(std::string_view name) {
  for (auto& p : builtin_profiles()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

OffloadEstimate estimate_frame_latency(std::uint64_t frame_bytes, std::uint64_t result_bytes,
                                       const LinkProfile& link) {
  link.validate();
  OffloadEstimate e;
  e.upload_ms = 8000.0 * static_cast<double>(frame_bytes) / link.uplink_bps;
  e.result_download_ms = 8000.0 * static_cast<double>(result_bytes) / link.downlink_bps;
  e.rtt_ms = link.rtt_ms;
  e.total_ms = e.upload_ms + e.result_download_ms + e.rtt_ms;
  e.max_fps = e.total_ms > 0.0 ? 1000.0 / e.total_ms : std::numeric_limits<double>::infinity();
  return e;
}

}  // namespace shadercanny
