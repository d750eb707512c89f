#include <doctest.h>

#include <cmath>

#include "stainbary/colorspace.hpp"
#include "stainbary/errors.hpp"
#include "stainbary/palette.hpp"

#include "synth.hpp"

using namespace stainbary;

TEST_CASE("single-color image collapses to one support point")
{
    const Image image = Image::filled(10, 10, {120, 40, 200});
    const ColorPalette palette = extract_palette(image, 8, 3);
    REQUIRE(palette.measure.size() == 1);
    CHECK(palette.measure.weights(0) == 1.0);
    for (int a : palette.assignments)
        CHECK(a == 0);
}

TEST_CASE("two-color image splits mass by pixel counts")
{
    Image image = Image::filled(10, 10, {255, 0, 0});
    for (int p = 0; p < 25; ++p)
        image.set(p % 10, p / 10, {0, 0, 255});

    const ColorPalette palette = extract_palette(image, 2, 7);
    REQUIRE(palette.measure.size() == 2);

    const double w0 = palette.measure.weights(0);
    const double w1 = palette.measure.weights(1);
    CHECK(std::max(w0, w1) == 0.75);
    CHECK(std::min(w0, w1) == 0.25);

    // Each centroid must sit on one of the two input colors in Lab space.
    const LabPixel red = rgb_to_lab({255, 0, 0});
    const LabPixel blue = rgb_to_lab({0, 0, 255});
    for (Eigen::Index c = 0; c < 2; ++c) {
        const double toRed = std::hypot(palette.measure.support(c, 0) - red.L,
                                        std::hypot(palette.measure.support(c, 1) - red.a,
                                                   palette.measure.support(c, 2) - red.b));
        const double toBlue = std::hypot(palette.measure.support(c, 0) - blue.L,
                                         std::hypot(palette.measure.support(c, 1) - blue.a,
                                                    palette.measure.support(c, 2) - blue.b));
        CHECK(std::min(toRed, toBlue) <= 1e-9);
    }
}

TEST_CASE("extraction is deterministic given the seed")
{
    const Image image = synth::tissue_frame(48, 40, 99);
    const ColorPalette p1 = extract_palette(image, 16, 1234);
    const ColorPalette p2 = extract_palette(image, 16, 1234);
    CHECK((p1.measure.support.array() == p2.measure.support.array()).all());
    CHECK((p1.measure.weights.array() == p2.measure.weights.array()).all());
    CHECK(p1.assignments == p2.assignments);
    CHECK((p1.residuals.array() == p2.residuals.array()).all());
}

TEST_CASE("weights are exact pixel fractions that sum to one")
{
    const Image image = synth::noise_image(37, 23, 5);
    const ColorPalette palette = extract_palette(image, 16, 42);

    std::vector<long> counts(std::size_t(palette.measure.size()), 0);
    for (int a : palette.assignments) {
        REQUIRE(a >= 0);
        REQUIRE(a < int(palette.measure.size()));
        ++counts[std::size_t(a)];
    }

    double sum = 0.0;
    long total = 0;
    for (Eigen::Index c = 0; c < palette.measure.size(); ++c) {
        CHECK(counts[std::size_t(c)] > 0);
        sum += palette.measure.weights(c);
        total += counts[std::size_t(c)];
    }
    CHECK(total == long(image.pixelCount()));
    CHECK(sum == 1.0);

    // Per-entry fractions match the assignment counts (the largest entry may
    // carry the closing ulp nudge).
    Eigen::Index largest = 0;
    for (Eigen::Index c = 0; c < palette.measure.size(); ++c)
        if (counts[std::size_t(c)] > counts[std::size_t(largest)])
            largest = c;
    for (Eigen::Index c = 0; c < palette.measure.size(); ++c) {
        const double exact = double(counts[std::size_t(c)]) / double(image.pixelCount());
        if (c == largest)
            CHECK(std::abs(palette.measure.weights(c) - exact) <= 1e-12);
        else
            CHECK(palette.measure.weights(c) == exact);
    }
}

TEST_CASE("centroid plus residual reproduces the pixel's Lab value")
{
    const Image image = synth::tissue_frame(32, 32, 11);
    const ColorPalette palette = extract_palette(image, 8, 0);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const std::size_t p = std::size_t(y) * 32 + std::size_t(x);
            const LabPixel lab = rgb_to_lab(image.at(x, y));
            const int c = palette.assignments[p];
            CHECK(std::abs(palette.measure.support(c, 0) + palette.residuals(Eigen::Index(p), 0) -
                           lab.L) <= 1e-10);
            CHECK(std::abs(palette.measure.support(c, 1) + palette.residuals(Eigen::Index(p), 1) -
                           lab.a) <= 1e-10);
            CHECK(std::abs(palette.measure.support(c, 2) + palette.residuals(Eigen::Index(p), 2) -
                           lab.b) <= 1e-10);
        }
    }
}

TEST_CASE("reconstruction with the original support is lossless")
{
    const Image image = synth::tissue_frame(40, 30, 21);
    const ColorPalette palette = extract_palette(image, 12, 9);
    const ReconstructedImage out = reconstruct(palette, palette.measure.support);
    CHECK(out.image == image);
    CHECK(out.gamutClipped == 0);
}

TEST_CASE("shifting the support in L brightens every pixel by the shift")
{
    // Mid-gray so the +10 L shift stays inside the gamut.
    const Image image = synth::gray_ramp(32, 8);
    const ColorPalette palette = extract_palette(image, 6, 4);

    Eigen::MatrixXd shifted = palette.measure.support;
    shifted.col(0).array() += 10.0;
    const ReconstructedImage out = reconstruct(palette, shifted);

    const double delta = synth::mean_luminance(out.image) - synth::mean_luminance(image);
    CHECK(delta >= 9.8);
    CHECK(delta <= 10.2);
}

TEST_CASE("lloyd objective never increases")
{
    const Image image = synth::noise_image(40, 40, 31);
    Eigen::MatrixXd points(int(image.pixelCount()), 3);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const LabPixel lab = rgb_to_lab(image.at(x, y));
            const Eigen::Index row = y * image.width + x;
            points(row, 0) = lab.L;
            points(row, 1) = lab.a;
            points(row, 2) = lab.b;
        }
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(points.rows());
    const KMeansResult result = kmeans(points, ones, 12, 77);
    REQUIRE(result.objective.size() >= 2);
    for (std::size_t i = 1; i < result.objective.size(); ++i)
        CHECK(result.objective[i] <= result.objective[i - 1] + 1e-9);
}

TEST_CASE("palette argument validation")
{
    const Image image = Image::filled(4, 4, {10, 10, 10});
    CHECK_THROWS_AS(extract_palette(image, 0, 0), InvalidArgument);
    CHECK_THROWS_AS(extract_palette(image, 17, 0), InvalidArgument);
    CHECK_THROWS_AS(extract_palette(Image{}, 1, 0), InvalidArgument);

    const ColorPalette palette = extract_palette(image, 1, 0);
    CHECK_THROWS_AS(reconstruct(palette, Eigen::MatrixXd::Zero(5, 3)), InvalidArgument);
}
