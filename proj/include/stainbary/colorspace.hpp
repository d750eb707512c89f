#pragma once

#include <cstdint>

namespace stainbary {

struct RgbPixel {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const RgbPixel&) const = default;
};

/// CIE L*a*b*, D65 white point, 2-degree observer. L in [0, 100]; a and b
/// stay within roughly +-128 for 8-bit sRGB inputs.
struct LabPixel {
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// sRGB -> Lab: inverse gamma, linear RGB -> XYZ (D65), XYZ -> Lab.
LabPixel rgb_to_lab(RgbPixel p);

/// Lab -> sRGB, rounding to 8 bits. Out-of-gamut values are clamped to
/// [0, 255]; the second overload reports whether clamping happened.
RgbPixel lab_to_rgb(const LabPixel& p);
RgbPixel lab_to_rgb(const LabPixel& p, bool& clipped);

} // namespace stainbary
