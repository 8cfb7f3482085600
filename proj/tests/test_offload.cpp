#include <gtest/gtest.h>

#include <cmath>

#include "shadercanny/errors.hpp"
#include "shadercanny/offload.hpp"

using namespace shadercanny;

TEST(Offload, BuiltinProfiles) {
  const auto profiles = builtin_profiles();
  ASSERT_EQ(profiles.size(), 3u);
  const auto bt = find_profile("bluetooth");
  ASSERT_TRUE(bt.has_value());
  EXPECT_EQ(bt->uplink_bps, 430e3);
  EXPECT_EQ(bt->downlink_bps, 950e3);
  const auto lte = find_profile("lte");
  ASSERT_TRUE(lte.has_value());
  EXPECT_EQ(lte->rtt_ms, 10.0);
  EXPECT_TRUE(find_profile("3g").has_value());
  EXPECT_FALSE(find_profile("wifi").has_value());
  for (const auto& p : profiles) EXPECT_NO_THROW(p.validate());
}

TEST(Offload, BluetoothVgaGreyUpload) {
  const auto e = estimate_frame_latency(307200, 0, *find_profile("bluetooth"));
  EXPECT_NEAR(e.upload_ms, 5715.3488, 0.1);
  EXPECT_EQ(e.result_download_ms, 0.0);
  EXPECT_NEAR(e.max_fps, 1000.0 / 5715.3488, 1e-6);
}

TEST(Offload, LteRoundTrip) {
  const auto e = estimate_frame_latency(307200, 38400, *find_profile("lte"));
  EXPECT_NEAR(e.upload_ms, 49.152, 1e-9);
  EXPECT_NEAR(e.result_download_ms, 3.072, 1e-9);
  EXPECT_NEAR(e.total_ms, 10.0 + 49.152 + 3.072, 1e-9);
}

TEST(Offload, ZeroBytesCostOnlyTheRoundTrip) {
  const auto e = estimate_frame_latency(0, 0, *find_profile("lte"));
  EXPECT_EQ(e.total_ms, 10.0);
  const auto z = estimate_frame_latency(0, 0, *find_profile("bluetooth"));
  EXPECT_EQ(z.total_ms, 0.0);
  EXPECT_TRUE(std::isinf(z.max_fps));
}

TEST(Offload, MonotoneAndLinearInBytes) {
  const auto link = *find_profile("3g");
  double last = -1.0;
  for (std::uint64_t bytes = 0; bytes <= 1'000'000; bytes += 50'000) {
    const auto e = estimate_frame_latency(bytes, bytes / 8, link);
    EXPECT_GT(e.total_ms, last);
    last = e.total_ms;
  }
  const auto one = estimate_frame_latency(100'000, 0, link);
  const auto two = estimate_frame_latency(200'000, 0, link);
  EXPECT_DOUBLE_EQ(two.upload_ms, 2.0 * one.upload_ms);
}

TEST(Offload, RejectsInvalidLinks) {
  LinkProfile bad{"bad", 0.0, 1e6, 0.0};
  EXPECT_THROW(estimate_frame_latency(1, 1, bad), InvalidInput);
  bad.uplink_bps = 1e6;
  bad.rtt_ms = -1.0;
  EXPECT_THROW(bad.validate(), InvalidInput);
  bad.rtt_ms = 0.0;
  bad.downlink_bps = -5.0;
  EXPECT_THROW(bad.validate(), InvalidInput);
}
