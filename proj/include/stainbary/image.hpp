#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stainbary/colorspace.hpp"

namespace stainbary {

/// 8-bit RGB image, interleaved, row-major.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    static Image filled(int width, int height, RgbPixel color);

    std::size_t pixelCount() const { return std::size_t(width) * std::size_t(height); }
    bool empty() const { return width == 0 || height == 0; }

    RgbPixel at(int x, int y) const
    {
        const std::size_t o = 3 * (std::size_t(y) * std::size_t(width) + std::size_t(x));
        return {pixels[o], pixels[o + 1], pixels[o + 2]};
    }

    void set(int x, int y, RgbPixel p)
    {
        const std::size_t o = 3 * (std::size_t(y) * std::size_t(width) + std::size_t(x));
        pixels[o] = p.r;
        pixels[o + 1] = p.g;
        pixels[o + 2] = p.b;
    }

    bool operator==(const Image&) const = default;
};

} // namespace stainbary
