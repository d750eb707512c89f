#include "stainbary/colorspace.hpp"

#include <algorithm>
#include <cmath>

namespace stainbary {

namespace {

// sRGB <-> XYZ (D65) matrices, IEC 61966-2-1.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kXyzToRgb[3][3] = {
    { 3.2404542, -1.5371385, -0.4985314},
    {-0.9692660,  1.8760108,  0.0415560},
    { 0.0556434, -0.2040259,  1.0572252},
};

// D65 reference white.
constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.00000;
constexpr double kWhiteZ = 1.08883;

constexpr double kLabEpsilon = 216.0 / 24389.0;  // (6/29)^3
constexpr double kLabKappa = 24389.0 / 27.0;     // (29/3)^3

double srgbToLinear(double c)
{
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linearToSrgb(double c)
{
    return c <= 0.0031308 ? c * 12.92 : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double labForward(double t)
{
    return t > kLabEpsilon ? std::cbrt(t) : (kLabKappa * t + 16.0) / 116.0;
}

double labInverse(double f)
{
    const double f3 = f * f * f;
    return f3 > kLabEpsilon ? f3 : (116.0 * f - 16.0) / kLabKappa;
}

} // namespace

LabPixel rgb_to_lab(RgbPixel p)
{
    const double rl = srgbToLinear(p.r / 255.0);
    const double gl = srgbToLinear(p.g / 255.0);
    const double bl = srgbToLinear(p.b / 255.0);

    const double x = kRgbToXyz[0][0] * rl + kRgbToXyz[0][1] * gl + kRgbToXyz[0][2] * bl;
    const double y = kRgbToXyz[1][0] * rl + kRgbToXyz[1][1] * gl + kRgbToXyz[1][2] * bl;
    const double z = kRgbToXyz[2][0] * rl + kRgbToXyz[2][1] * gl + kRgbToXyz[2][2] * bl;

    const double fx = labForward(x / kWhiteX);
    const double fy = labForward(y / kWhiteY);
    const double fz = labForward(z / kWhiteZ);

    LabPixel lab;
    lab.L = 116.0 * fy - 16.0;
    lab.a = 500.0 * (fx - fy);
    lab.b = 200.0 * (fy - fz);
    return lab;
}

RgbPixel lab_to_rgb(const LabPixel& p)
{
    bool clipped = false;
    return lab_to_rgb(p, clipped);
}

RgbPixel lab_to_rgb(const LabPixel& p, bool& clipped)
{
    const double fy = (p.L + 16.0) / 116.0;
    const double fx = fy + p.a / 500.0;
    const double fz = fy - p.b / 200.0;

    const double x = labInverse(fx) * kWhiteX;
    const double y = labInverse(fy) * kWhiteY;
    const double z = labInverse(fz) * kWhiteZ;

    const double rl = kXyzToRgb[0][0] * x + kXyzToRgb[0][1] * y + kXyzToRgb[0][2] * z;
    const double gl = kXyzToRgb[1][0] * x + kXyzToRgb[1][1] * y + kXyzToRgb[1][2] * z;
    const double bl = kXyzToRgb[2][0] * x + kXyzToRgb[2][1] * y + kXyzToRgb[2][2] * z;

    clipped = false;
    auto quantize = [&clipped](double linear) -> std::uint8_t {
        const double c = linearToSrgb(linear) * 255.0;
        const double rounded = std::round(c);
        if (rounded < 0.0 || rounded > 255.0)
            clipped = true;
        return std::uint8_t(std::clamp(rounded, 0.0, 255.0));
    };

    return {quantize(rl), quantize(gl), quantize(bl)};
}

} // namespace stainbary
