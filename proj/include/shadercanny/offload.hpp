#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shadercanny {

/// Transport used to ship frames off the device. Rates in bits per second
/// (decimal kilo/mega), round trip in milliseconds.
struct LinkProfile {
  std::string name;
  double uplink_bps = 0.0;
  double downlink_bps = 0.0;
  double rtt_ms = 0.0;

  /// Throws InvalidInput unless both rates are positive and rtt >= 0.
  void validate() const;
};

struct OffloadEstimate {
  double upload_ms = 0.0;
  double result_download_ms = 0.0;
  double rtt_ms = 0.0;
  double total_ms = 0.0;
  /// 1000 / total_ms; infinite for a zero total.
  double max_fps = 0.0;
};

/// Measured Bluetooth (430 kbps up / 950 kbps down), typical 3G
/// (150 kbps / 2 Mbps) and LTE (50 Mbps / 100 Mbps, 10 ms round trip).
/// Bluetooth and 3G have no published round trip and default to 0 ms.
std::vector<LinkProfile> builtin_profiles();

std::optional<LinkProfile> find_profile(std::string_view name);

/// Pure transport arithmetic, one frame in flight:
/// upload = 8000 * frame_bytes / uplink, download = 8000 * result_bytes / downlink.
OffloadEstimate estimate_frame_latency(std::uint64_t frame_bytes, std::uint64_t result_bytes,
                                       const LinkProfile& link);

}  // namespace shadercanny
