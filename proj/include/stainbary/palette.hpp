#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "stainbary/image.hpp"
#include "stainbary/measure.hpp"

namespace stainbary {

inline constexpr int kDefaultPaletteSize = 256;

/// Quantized Lab color distribution of an image plus everything needed to
/// rebuild the image after its support has been moved.
struct ColorPalette {
    DiscreteMeasure measure;        // Lab support, weights = pixel counts / total
    std::vector<int> assignments;   // per pixel, row-major
    Eigen::MatrixXd residuals;      // per pixel Lab offset from its centroid
    int width = 0;
    int height = 0;
};

struct KMeansResult {
    Eigen::MatrixXd centroids;      // final centroids, empty clusters dropped
    std::vector<int> assignments;   // per input point
    std::vector<double> objective;  // weighted SSE recorded per Lloyd iteration
    int iterations = 0;
};

/// Weighted k-means++ seeding followed by Lloyd iterations (at most
/// maxIterations, stopping early when no centroid moves more than
/// moveTolerance). Deterministic given the seed; exact distance ties assign
/// to the lowest cluster index.
KMeansResult kmeans(const Eigen::MatrixXd& points, const Eigen::VectorXd& pointWeights,
                    int k, std::uint64_t seed, int maxIterations = 50,
                    double moveTolerance = 1e-4);

/// Quantizes the image to at most k Lab colors. Weights are exact pixel
/// fractions and the per-pixel residuals make reconstruct() lossless.
ColorPalette extract_palette(const Image& image, int k, std::uint64_t seed);

struct ReconstructedImage {
    Image image;
    std::size_t gamutClipped = 0;  // pixels clamped during Lab -> sRGB
};

/// pixel = lab_to_rgb(newSupport[assignment] + residual). Passing the
/// palette's own support reproduces the source image exactly.
ReconstructedImage reconstruct(const ColorPalette& palette, const Eigen::MatrixXd& newSupport);

} // namespace stainbary
