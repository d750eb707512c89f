#pragma once

#include <string>

#include "stainbary/image.hpp"

namespace stainbary {

/// Reads a PNG or JPEG file, detected by magic bytes. Gray, palette and
/// alpha variants are expanded to 8-bit RGB. Throws IoError on failure.
Image load_image(const std::string& path);

/// Writes an 8-bit RGB PNG with fixed encoder settings and no ancillary
/// chunks, so identical pixels produce identical bytes.
void save_png(const Image& image, const std::string& path);

} // namespace stainbary
