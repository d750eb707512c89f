#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "stainbary/colorspace.hpp"

#include "oracles.hpp"

using stainbary::LabPixel;
using stainbary::RgbPixel;
using stainbary::lab_to_rgb;
using stainbary::rgb_to_lab;

TEST_CASE("white maps to L=100 and neutral chroma")
{
    const LabPixel lab = rgb_to_lab({255, 255, 255});
    CHECK(std::abs(lab.L - 100.0) <= 1e-2);
    CHECK(std::abs(lab.a) <= 1e-2);
    CHECK(std::abs(lab.b) <= 1e-2);
}

TEST_CASE("black maps to the origin")
{
    const LabPixel lab = rgb_to_lab({0, 0, 0});
    CHECK(std::abs(lab.L) <= 1e-9);
    CHECK(std::abs(lab.a) <= 1e-9);
    CHECK(std::abs(lab.b) <= 1e-9);
}

TEST_CASE("pure red matches the CIE reference values")
{
    const LabPixel lab = rgb_to_lab({255, 0, 0});
    CHECK(std::abs(lab.L - 53.24) <= 0.05);
    CHECK(std::abs(lab.a - 80.09) <= 0.05);
    CHECK(std::abs(lab.b - 67.20) <= 0.05);
}

TEST_CASE("agrees with an independently written reference conversion")
{
    for (int r = 0; r < 256; r += 37) {
        for (int g = 0; g < 256; g += 41) {
            for (int b = 0; b < 256; b += 43) {
                const LabPixel lab = rgb_to_lab({std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)});
                const oracle::Lab ref = oracle::reference_lab(r, g, b);
                CHECK(std::abs(lab.L - ref.L) <= 1e-9);
                CHECK(std::abs(lab.a - ref.a) <= 1e-9);
                CHECK(std::abs(lab.b - ref.b) <= 1e-9);
            }
        }
    }
}

TEST_CASE("L=100 converts back to white")
{
    CHECK(lab_to_rgb({100.0, 0.0, 0.0}) == RgbPixel{255, 255, 255});
}

TEST_CASE("inverse of the red reference lands within one step")
{
    const RgbPixel rgb = lab_to_rgb({53.24, 80.09, 67.20});
    CHECK(std::abs(int(rgb.r) - 255) <= 1);
    CHECK(std::abs(int(rgb.g) - 0) <= 1);
    CHECK(std::abs(int(rgb.b) - 0) <= 1);
}

TEST_CASE("17^3 lattice round-trips exactly")
{
    for (int r = 0; r < 256; r += 16) {
        for (int g = 0; g < 256; g += 16) {
            for (int b = 0; b < 256; b += 16) {
                const RgbPixel in{std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)};
                bool clipped = false;
                const RgbPixel out = lab_to_rgb(rgb_to_lab(in), clipped);
                CHECK(out == in);
                CHECK(!clipped);
            }
        }
    }
}

TEST_CASE("stride-5 sweep of the cube round-trips within one step")
{
    int maxError = 0;
    for (int r = 0; r < 256; r += 5) {
        for (int g = 0; g < 256; g += 5) {
            for (int b = 0; b < 256; b += 5) {
                const RgbPixel in{std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)};
                const RgbPixel out = lab_to_rgb(rgb_to_lab(in));
                maxError = std::max({maxError, std::abs(int(out.r) - r),
                                     std::abs(int(out.g) - g), std::abs(int(out.b) - b)});
            }
        }
    }
    CHECK(maxError <= 1);
}

TEST_CASE("grayscale ramp is monotone in L with neutral chroma")
{
    double previous = -1.0;
    for (int v = 0; v < 256; ++v) {
        const LabPixel lab = rgb_to_lab({std::uint8_t(v), std::uint8_t(v), std::uint8_t(v)});
        CHECK(lab.L > previous);
        previous = lab.L;
        CHECK(std::abs(lab.a) <= 0.01);
        CHECK(std::abs(lab.b) <= 0.01);
    }
}

TEST_CASE("out-of-gamut lab values are clamped and flagged")
{
    bool clipped = false;
    const RgbPixel rgb = lab_to_rgb({50.0, 200.0, -200.0}, clipped);
    CHECK(clipped);
    CHECK(rgb.r <= 255);

    clipped = true;
    lab_to_rgb({50.0, 0.0, 0.0}, clipped);
    CHECK(!clipped);
}
