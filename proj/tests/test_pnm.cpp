#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "shadercanny/errors.hpp"
#include "shadercanny/pnm.hpp"

using namespace shadercanny;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

std::size_t failure_offset(const std::string& data) {
  try {
    pnm::decode(bytes_of(data));
  } catch (const PnmError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "expected a parse failure";
  return 0;
}

}  // namespace

TEST(Pnm, DecodesP5WithComments) {
  const auto img = pnm::decode(bytes_of("P5\n# made by hand\n3 # width\n2\n255\nabcdef"));
  EXPECT_EQ(img.width, 3);
  EXPECT_EQ(img.height, 2);
  EXPECT_EQ(img.layout, PixelLayout::grey8);
  EXPECT_EQ(img.bytes, bytes_of("abcdef"));
}

TEST(Pnm, DecodesP6) {
  const auto img = pnm::decode(bytes_of("P6 1 2 255\n\x01\x02\x03\x04\x05\x06"));
  EXPECT_EQ(img.layout, PixelLayout::rgb888);
  EXPECT_EQ(img.bytes.size(), 6u);
  EXPECT_EQ(img.bytes[5], 6);
}

TEST(Pnm, PixelDataMayStartWithWhitespaceByte) {
  const auto img = pnm::decode(bytes_of("P5 2 1 255\n\n "));
  EXPECT_EQ(img.bytes, bytes_of("\n "));
}

TEST(Pnm, EncodeDecodeRoundTrip) {
  ImageBuffer img{4, 3, PixelLayout::rgb888, {}};
  for (int i = 0; i < 36; ++i) img.bytes.push_back(static_cast<std::uint8_t>(i * 7));
  EXPECT_EQ(pnm::decode(pnm::encode(img)), img);
  const auto header = pnm::encode(ImageBuffer{2, 1, PixelLayout::grey8, {0, 255}});
  EXPECT_EQ(std::string(header.begin(), header.begin() + 11), "P5\n2 1\n255\n");
}

TEST(Pnm, ErrorsCarryOffsets) {
  try {
    pnm::decode(bytes_of("P3 1 1 255\n0 0 0"));
    FAIL();
  } catch (const PnmError& e) {
    EXPECT_EQ(e.offset(), 0u);
    EXPECT_NE(std::string(e.what()).find("not a PNM file"), std::string::npos);
  }
  EXPECT_EQ(failure_offset("P5 x 1 255\n"), 3u);
  EXPECT_EQ(failure_offset("P5 2 1 65535\n"), 7u);
  EXPECT_EQ(failure_offset("P5 0 1 255\n"), 3u);
  EXPECT_EQ(failure_offset("P5 2 2 255\nabc"), 14u);  // truncated: fails at end of data
  EXPECT_EQ(failure_offset("P5"), 2u);
  EXPECT_EQ(failure_offset("P55 1 1 255\n"), 2u);
}

TEST(Pnm, FileRoundTripAndMissingFile) {
  const auto dir = std::filesystem::path(SHADERCANNY_TEST_TMP) / "pnm";
  std::filesystem::create_directories(dir);
  const ImageBuffer img{2, 2, PixelLayout::grey8, {1, 2, 3, 4}};
  pnm::write(dir / "a.pgm", img);
  EXPECT_EQ(pnm::read(dir / "a.pgm"), img);
  EXPECT_THROW(pnm::read(dir / "missing.pgm"), InvalidInput);
}
