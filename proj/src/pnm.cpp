#include "shadercanny/pnm.hpp"

#include <fstream>
#include <iterator>
#include <string>

#include "shadercanny/errors.hpp"

namespace shadercanny::pnm {
namespace {

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> data) : data_(data) {}

  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      if (is_space(data_[pos_])) {
        ++pos_;
      } else if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n' && data_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  int read_int(const char* field) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long long value = 0;
    while (pos_ < data_.size() && data_[pos_] >= '0' && data_[pos_] <= '9') {
      value = value * 10 + (data_[pos_] - '0');
      if (value > 1'000'000'000) {
        throw PnmError(std::string(field) + " is too large", start);
      }
      ++pos_;
    }
    if (pos_ == start) {
      throw PnmError(std::string("expected ") + field, pos_);
    }
    return static_cast<int>(value);
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }
  bool at_end() const { return pos_ >= data_.size(); }
  std::uint8_t peek() const { return data_[pos_]; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace

ImageBuffer decode(std::span<const std::uint8_t> data) {
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '5' && data[1] != '6')) {
    throw PnmError("not a PNM file", 0);
  }
  const PixelLayout layout = data[1] == '5' ? PixelLayout::grey8 : PixelLayout::rgb888;

  HeaderReader header(data.subspan(0));
  header.advance();
  header.advance();
  if (header.at_end() || !(is_space(header.peek()) || header.peek() == '#')) {
    throw PnmError("not a PNM file", header.pos());
  }

  header.skip_space_and_comments();
  const std::size_t width_at = header.pos();
  const int width = header.read_int("width");
  const int height = header.read_int("height");
  if (width < 1 || height < 1) {
    throw PnmError("image dimensions must be positive", width_at);
  }
  header.skip_space_and_comments();
  const std::size_t maxval_at = header.pos();
  const int maxval = header.read_int("maxval");
  if (maxval != 255) {
    throw PnmError("unsupported maxval " + std::to_string(maxval) + " (only 255)",
                   maxval_at);
  }
  if (header.at_end() || !is_space(header.peek())) {
    throw PnmError("expected single whitespace after maxval", header.pos());
  }
  header.advance();

  const std::size_t offset = header.pos();
  const auto expected = static_cast<std::size_t>(width) *
                        static_cast<std::size_t>(height) *
                        static_cast<std::size_t>(channel_count(layout));
  if (data.size() - offset < expected) {
    throw PnmError("truncated pixel data: expected " + std::to_string(expected) +
                       " bytes, found " + std::to_string(data.size() - offset),
                   data.size());
  }

  ImageBuffer image;
  image.width = width;
  image.height = height;
  image.layout = layout;
  image.bytes.assign(data.begin() + static_cast<std::ptrdiff_t>(offset),
                     data.begin() + static_cast<std::ptrdiff_t>(offset + expected));
  return image;
}

std::vector<std::uint8_t> encode(const ImageBuffer& image) {
  image.validate();
  const std::string header = std::string(image.layout == PixelLayout::grey8 ? "P5" : "P6") +
                             "\n" + std::to_string(image.width) + " " +
                             std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.bytes.begin(), image.bytes.end());
  return out;
}

ImageBuffer read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidInput("cannot open " + path.string());
  }
  const std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  try {
    return decode(data);
  } catch (const PnmError& e) {
    throw PnmError(path.string() + ": " + e.detail(), e.offset());
  }
}

void write(const std::filesystem::path& path, const ImageBuffer& image) {
  const auto bytes = encode(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw InvalidInput("cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw InvalidInput("failed writing " + path.string());
  }
}

}  // namespace shadercanny::pnm
