#pragma once

#include <filesystem>

#include "fpqual/image.hpp"

namespace fpqual {

/// Reads a binary PGM (P5, maxval 255) or an 8-bit grayscale PNG.
/// The format is detected from the file's magic bytes, not its extension.
/// `dpi` becomes the image's resolution metadata (files carry none we trust).
/// Throws FormatError naming the offending property on anything else.
GrayImage load_image(const std::filesystem::path& path, int dpi = 500);

/// Writes a binary PGM (P5, maxval 255).
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

}  // namespace fpqual
