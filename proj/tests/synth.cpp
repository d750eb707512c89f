#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "stainbary/colorspace.hpp"
#include "stainbary/errors.hpp"

namespace synth {

using stainbary::LabPixel;
using stainbary::lab_to_rgb;
using stainbary::rgb_to_lab;

namespace {

double nextUnit(std::mt19937_64& rng)
{
    return double(rng() >> 11) * 0x1.0p-53;
}

double nextGaussian(std::mt19937_64& rng)
{
    // Box-Muller; avoids the implementation-defined std::normal_distribution.
    const double u1 = std::max(nextUnit(rng), 1e-12);
    const double u2 = nextUnit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::uint8_t clamp8(double v)
{
    return std::uint8_t(std::clamp(v, 0.0, 255.0));
}

} // namespace

Image tissue_frame(int width, int height, std::uint64_t seed, double density)
{
    std::mt19937_64 rng(seed);
    Image image;
    image.width = width;
    image.height = height;
    image.pixels.resize(image.pixelCount() * 3);

    // Stroma: light pink with low-frequency waves and grain.
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double wave = 10.0 * std::sin(x * 0.07) * std::cos(y * 0.05);
            const double grain = (nextUnit(rng) - 0.5) * 14.0;
            image.set(x, y,
                      {clamp8(232.0 + wave + grain), clamp8(186.0 + 0.8 * wave + grain),
                       clamp8(204.0 + 0.9 * wave + grain)});
        }
    }

    // Nuclei: dark purple ellipses with jittered size, tone and orientation.
    const int blobCount = std::max(1, int(density * double(width) * double(height) / 900.0));
    for (int blob = 0; blob < blobCount; ++blob) {
        const double cx = nextUnit(rng) * width;
        const double cy = nextUnit(rng) * height;
        const double rx = 3.0 + nextUnit(rng) * 6.0;
        const double ry = 3.0 + nextUnit(rng) * 6.0;
        const double angle = nextUnit(rng) * 3.14159265358979323846;
        const double darkness = 0.55 + 0.45 * nextUnit(rng);
        const double ca = std::cos(angle), sa = std::sin(angle);

        const int x0 = std::max(0, int(cx - rx - ry)), x1 = std::min(width - 1, int(cx + rx + ry));
        const int y0 = std::max(0, int(cy - rx - ry)), y1 = std::min(height - 1, int(cy + rx + ry));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx = x - cx, dy = y - cy;
                const double u = (ca * dx + sa * dy) / rx;
                const double v = (-sa * dx + ca * dy) / ry;
                const double r2 = u * u + v * v;
                if (r2 > 1.0)
                    continue;
                const double fade = darkness * (1.0 - 0.5 * r2);
                const RgbPixel base = image.at(x, y);
                image.set(x, y, {clamp8(base.r - fade * (base.r - 72.0)),
                                 clamp8(base.g - fade * (base.g - 42.0)),
                                 clamp8(base.b - fade * (base.b - 118.0))});
            }
        }
    }
    return image;
}

Image noise_image(int width, int height, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    Image image;
    image.width = width;
    image.height = height;
    image.pixels.resize(image.pixelCount() * 3);
    for (std::uint8_t& value : image.pixels)
        value = std::uint8_t(rng() & 0xFF);
    return image;
}

Image gray_ramp(int width, int height)
{
    Image image;
    image.width = width;
    image.height = height;
    image.pixels.resize(image.pixelCount() * 3);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::uint8_t v = std::uint8_t(40 + (x * 176) / std::max(1, width - 1));
            image.set(x, y, {v, v, v});
        }
    }
    return image;
}

Image recolor_lab(const Image& image, double sL, double dL, double sa, double da,
                  double sb, double db)
{
    Image out = image;
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const LabPixel lab = rgb_to_lab(image.at(x, y));
            out.set(x, y, lab_to_rgb({sL * lab.L + dL, sa * lab.a + da, sb * lab.b + db}));
        }
    }
    return out;
}

Image add_noise(const Image& image, double sigma, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    Image out = image;
    for (std::size_t i = 0; i < out.pixels.size(); ++i)
        out.pixels[i] = clamp8(double(image.pixels[i]) + sigma * nextGaussian(rng));
    return out;
}

Image pad_background(const Image& image, double backgroundFraction, RgbPixel background)
{
    // Scale the canvas so the original covers (1 - fraction) of it.
    const double scale = 1.0 / std::sqrt(1.0 - backgroundFraction);
    const int outW = std::max(image.width + 2, int(std::lround(image.width * scale)));
    const int outH = std::max(image.height + 2, int(std::lround(image.height * scale)));

    Image out = Image::filled(outW, outH, background);
    const int offX = (outW - image.width) / 2;
    const int offY = (outH - image.height) / 2;
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            out.set(offX + x, offY + y, image.at(x, y));
    return out;
}

double mean_lab_distance(const Image& a, const Image& b)
{
    if (a.width != b.width || a.height != b.height)
        throw stainbary::InvalidArgument("mean_lab_distance: size mismatch");
    double total = 0.0;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            const LabPixel la = rgb_to_lab(a.at(x, y));
            const LabPixel lb = rgb_to_lab(b.at(x, y));
            const double dL = la.L - lb.L, da = la.a - lb.a, db = la.b - lb.b;
            total += std::sqrt(dL * dL + da * da + db * db);
        }
    }
    return total / double(a.pixelCount());
}

double mean_chroma(const Image& image)
{
    double total = 0.0;
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const LabPixel lab = rgb_to_lab(image.at(x, y));
            total += std::sqrt(lab.a * lab.a + lab.b * lab.b);
        }
    }
    return total / double(image.pixelCount());
}

double mean_luminance(const Image& image)
{
    double total = 0.0;
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            total += rgb_to_lab(image.at(x, y)).L;
    return total / double(image.pixelCount());
}

int max_channel_difference(const Image& a, const Image& b)
{
    if (a.width != b.width || a.height != b.height || a.pixels.size() != b.pixels.size())
        throw stainbary::InvalidArgument("max_channel_difference: size mismatch");
    int worst = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i)
        worst = std::max(worst, std::abs(int(a.pixels[i]) - int(b.pixels[i])));
    return worst;
}

} // namespace synth
