#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "shadercanny/texture.hpp"

namespace shadercanny::pnm {

/// Parses a binary PNM image: P5 (grey8) or P6 (rgb888), maxval 255.
/// Header comments (#...) are allowed between tokens. Throws PnmError with
/// the byte offset of the first problem.
ImageBuffer decode(std::span<const std::uint8_t> data);

/// Serializes as P5 or P6 depending on the layout.
std::vector<std::uint8_t> encode(const ImageBuffer& image);

ImageBuffer read(const std::filesystem::path& path);
void write(const std::filesystem::path& path, const ImageBuffer& image);

}  // namespace shadercanny::pnm
